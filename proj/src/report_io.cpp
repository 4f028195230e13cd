#include "lcgeom/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lcgeom/errors.hpp"

namespace lcgeom {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

Json report_to_json(const InequalityReport& r) {
    Json j;
    j["name"] = r.name;
    j["lhs"] = json_number(r.lhs);
    j["rhs"] = json_number(r.rhs);
    j["slack"] = json_number(r.slack);
    j["tolerance"] = json_number(r.tolerance);
    j["eq_tolerance"] = json_number(r.eq_tolerance);
    j["verdict"] = to_string(r.verdict);
    Json terms = Json::object();
    for (const auto& [k, v] : r.terms) terms[k] = json_number(v);
    j["terms"] = std::move(terms);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

InequalityReport report_from_json(const Json& j) {
    InequalityReport r;
    r.name = j.at("name").get<std::string>();
    r.lhs = number_from_json(j.at("lhs"));
    r.rhs = number_from_json(j.at("rhs"));
    r.slack = number_from_json(j.at("slack"));
    r.tolerance = number_from_json(j.at("tolerance"));
    r.eq_tolerance = number_from_json(j.at("eq_tolerance"));
    const std::string v = j.at("verdict").get<std::string>();
    if (v == "PASS")
        r.verdict = Verdict::Pass;
    else if (v == "EQUALITY")
        r.verdict = Verdict::Equality;
    else if (v == "FAIL")
        r.verdict = Verdict::Fail;
    else if (v == "SKIPPED")
        r.verdict = Verdict::Skipped;
    else
        throw ConfigError("report: unknown verdict \"" + v + "\"");
    if (j.contains("terms"))
        for (const auto& [k, val] : j.at("terms").items())
            r.terms[k] = number_from_json(val);
    r.note = j.value("note", std::string());
    return r;
}

std::string reports_to_csv(const std::vector<InequalityReport>& reports) {
    std::string out = "name,lhs,rhs,slack,tolerance,eq_tolerance,verdict,note\r\n";
    for (const InequalityReport& r : reports) {
        out += csv_field(r.name);
        for (double v : {r.lhs, r.rhs, r.slack, r.tolerance, r.eq_tolerance})
            out += "," + format_number(v);
        out += "," + to_string(r.verdict);
        out += "," + csv_field(r.note) + "\r\n";
    }
    return out;
}

std::string sweep_to_csv(const std::vector<std::array<double, 3>>& rows) {
    std::string out = "parameter,value,error_estimate\r\n";
    for (const auto& row : rows) {
        out += format_number(row[0]);
        out += "," + format_number(row[1]);
        out += "," + format_number(row[2]) + "\r\n";
    }
    return out;
}

std::string format_report_line(const InequalityReport& r) {
    std::ostringstream os;
    std::string v = to_string(r.verdict);
    v.resize(8, ' ');
    os << v << ' ' << r.name << "  lhs=" << format_number(r.lhs)
       << "  rhs=" << format_number(r.rhs) << "  slack=" << format_number(r.slack);
    if (!r.note.empty()) os << "  (" << r.note << ")";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f.write(content.data(), std::streamsize(content.size()));
    if (!f) throw ConfigError("short write: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace lcgeom
