#pragma once

#include <functional>
#include <string>

namespace lcgeom {

enum class GenShape { NegLog, Power, TLogT, AbsDev, Custom };

/// Generator f: (0, inf) -> R for f-divergences, together with the exact
/// derivative data at t = 1 that the Pinsker-type bounds consume. Density
/// ratios arrive in log space, so evaluation goes through f(e^s).
struct DivergenceGenerator {
    GenShape shape = GenShape::NegLog;
    std::string name = "neg_log";
    double lam = 0.0; // Power exponent

    double f1 = 0.0;    // f(1)
    double fp1 = 0.0;   // f'(1)
    double fpp1 = 0.0;  // f''(1)
    double fppp1 = 0.0; // f'''(1)

    bool differentiable = true;
    int convexity = +1;         // +1 convex, -1 concave, 0 linear
    bool strictly_convex = true; // or strictly concave when convexity = -1

    std::function<double(double)> custom_of_log;       // s -> f(e^s)
    std::function<double(double)> custom_deriv_of_log; // s -> f'(e^s)

    /// f(t) = -ln t. Kullback-Leibler generator; strictly convex.
    static DivergenceGenerator neg_log();

    /// f(t) = t^lam. Convex for lam outside (0,1), concave inside, linear at
    /// the endpoints. D_f recovers the lambda-affine surface area.
    static DivergenceGenerator power(double lam);

    /// f(t) = t ln t. The reversed Kullback-Leibler generator.
    static DivergenceGenerator t_log_t();

    /// f(t) = |t - 1|. Total variation; convex but neither strictly convex
    /// nor differentiable at 1.
    static DivergenceGenerator abs_dev();

    static DivergenceGenerator custom(std::string name,
                                      std::function<double(double)> of_log,
                                      std::function<double(double)> deriv_of_log, double f1,
                                      double fp1, double fpp1, double fppp1, int convexity,
                                      bool strictly_convex);

    double eval(double t) const;

    /// f(e^s); preferred entry point since ratios are tracked as logs.
    double eval_log(double s) const;

    /// f'(e^s); throws ConditionError when the generator is not
    /// differentiable (AbsDev, or Custom without a derivative).
    double deriv_log(double s) const;
};

} // namespace lcgeom
