#include "lcgeom/generators.hpp"

#include <cmath>

#include "lcgeom/errors.hpp"

namespace lcgeom {

DivergenceGenerator DivergenceGenerator::neg_log() {
    DivergenceGenerator g;
    g.shape = GenShape::NegLog;
    g.name = "neg_log";
    g.f1 = 0.0;
    g.fp1 = -1.0;
    g.fpp1 = 1.0;
    g.fppp1 = -2.0;
    g.convexity = +1;
    g.strictly_convex = true;
    return g;
}

DivergenceGenerator DivergenceGenerator::power(double lam) {
    DivergenceGenerator g;
    g.shape = GenShape::Power;
    g.name = "power_" + std::to_string(lam);
    g.lam = lam;
    g.f1 = 1.0;
    g.fp1 = lam;
    g.fpp1 = lam * (lam - 1.0);
    g.fppp1 = lam * (lam - 1.0) * (lam - 2.0);
    if (lam == 0.0 || lam == 1.0) {
        g.convexity = 0;
        g.strictly_convex = false;
    } else if (lam > 0.0 && lam < 1.0) {
        g.convexity = -1;
        g.strictly_convex = true;
    } else {
        g.convexity = +1;
        g.strictly_convex = true;
    }
    return g;
}

DivergenceGenerator DivergenceGenerator::t_log_t() {
    DivergenceGenerator g;
    g.shape = GenShape::TLogT;
    g.name = "t_log_t";
    g.f1 = 0.0;
    g.fp1 = 1.0;
    g.fpp1 = 1.0;
    g.fppp1 = -1.0;
    g.convexity = +1;
    g.strictly_convex = true;
    return g;
}

DivergenceGenerator DivergenceGenerator::abs_dev() {
    DivergenceGenerator g;
    g.shape = GenShape::AbsDev;
    g.name = "abs_dev";
    g.f1 = 0.0;
    g.fp1 = g.fpp1 = g.fppp1 = std::nan("");
    g.differentiable = false;
    g.convexity = +1;
    g.strictly_convex = false;
    return g;
}

DivergenceGenerator DivergenceGenerator::custom(std::string name,
                                                std::function<double(double)> of_log,
                                                std::function<double(double)> deriv_of_log,
                                                double f1, double fp1, double fpp1, double fppp1,
                                                int convexity, bool strictly_convex) {
    if (!of_log) throw ParameterError("custom generator: evaluation function required");
    DivergenceGenerator g;
    g.shape = GenShape::Custom;
    g.name = std::move(name);
    g.custom_of_log = std::move(of_log);
    g.custom_deriv_of_log = std::move(deriv_of_log);
    g.f1 = f1;
    g.fp1 = fp1;
    g.fpp1 = fpp1;
    g.fppp1 = fppp1;
    g.convexity = convexity;
    g.strictly_convex = strictly_convex;
    g.differentiable = bool(g.custom_deriv_of_log);
    return g;
}

double DivergenceGenerator::eval(double t) const {
    if (!(t > 0)) throw DomainError("generator argument must be positive");
    return eval_log(std::log(t));
}

double DivergenceGenerator::eval_log(double s) const {
    switch (shape) {
        case GenShape::NegLog: return -s;
        case GenShape::Power: return lam == 0.0 ? 1.0 : std::exp(lam * s);
        case GenShape::TLogT: return std::isinf(s) && s < 0 ? 0.0 : std::exp(s) * s;
        case GenShape::AbsDev: return std::abs(std::expm1(s));
        case GenShape::Custom: return custom_of_log(s);
    }
    throw ParameterError("generator: unknown shape");
}

double DivergenceGenerator::deriv_log(double s) const {
    switch (shape) {
        case GenShape::NegLog: return -std::exp(-s);
        case GenShape::Power: return lam * std::exp((lam - 1.0) * s);
        case GenShape::TLogT: return s + 1.0;
        case GenShape::AbsDev:
            throw ConditionError("abs_dev generator is not differentiable at 1");
        case GenShape::Custom:
            if (!custom_deriv_of_log)
                throw ConditionError("custom generator has no derivative");
            return custom_deriv_of_log(s);
    }
    throw ParameterError("generator: unknown shape");
}

} // namespace lcgeom
