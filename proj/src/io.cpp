#include "hologen/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hologen {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError(where + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
    return *it;
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number, got " + std::string(j.type_name()));
    return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer, got " + std::string(j.type_name()));
    return j.get<int>();
}

std::string child(const std::string& where, std::size_t i) {
    return where + "[" + std::to_string(i) + "]";
}

// Nonfinite values have no JSON literal; keep them readable.
Json real(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

Json stage_json(const StageCheck& s) {
    return {{"passed", s.passed}, {"checks", s.checks}, {"min_slack", real(s.min_slack)}};
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                         msg);
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write file");
    out << text;
}

Complex parse_complex(const Json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) fail(where, "expected [re, im]");
    return {number(j[0], child(where, 0)), number(j[1], child(where, 1))};
}

Vector parse_vector(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of [re, im] pairs");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = parse_complex(j[i], child(where, i));
    return v;
}

Matrix parse_matrix(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array()) fail(child(where, 0), "expected a row array");
    const std::size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row_where = child(where, r);
        if (!j[r].is_array() || j[r].size() != cols)
            fail(row_where, "expected a row of " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_complex(j[r][c], child(row_where, c));
    }
    return m;
}

NormedSpace parse_space(const Json& j, const std::string& where) {
    const int dim = integer(field(j, "dim", where), where + ".dim");
    const Json& pj = field(j, "p", where);
    try {
        if (pj.is_string()) {
            const auto s = pj.get<std::string>();
            if (s != "inf") fail(where + ".p", "expected a number or \"inf\", got \"" + s + "\"");
            return NormedSpace::infinity(dim);
        }
        return NormedSpace(dim, number(pj, where + ".p"));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

PolyMap parse_map(const Json& j) {
    if (!j.is_object()) fail("map", "expected an object");
    const NormedSpace space = parse_space(field(j, "space", "map"), "space");
    const int n = space.dim();

    Vector constant = Vector::Zero(n);
    if (j.contains("constant")) {
        constant = parse_vector(j["constant"], "constant");
        if (constant.size() != n)
            fail("constant", "expected " + std::to_string(n) + " entries, got " +
                                 std::to_string(constant.size()));
    }
    Matrix linear = Matrix::Zero(n, n);
    if (j.contains("linear")) {
        linear = parse_matrix(j["linear"], "linear");
        if (linear.rows() != n || linear.cols() != n)
            fail("linear", "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }

    std::vector<HomPoly> parts;
    if (j.contains("terms")) {
        const Json& terms = j["terms"];
        if (!terms.is_array()) fail("terms", "expected an array");
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto where = child("terms", t);
            const int degree = integer(field(terms[t], "degree", where), where + ".degree");
            const Json& mono = field(terms[t], "monomial", where);
            if (!mono.is_array() || static_cast<int>(mono.size()) != n)
                fail(where + ".monomial", "expected " + std::to_string(n) + " exponents");
            std::vector<int> exps(n);
            int total = 0;
            for (int k = 0; k < n; ++k) {
                exps[k] = integer(mono[k], child(where + ".monomial", k));
                if (exps[k] < 0) fail(child(where + ".monomial", k), "negative exponent");
                total += exps[k];
            }
            if (total != degree)
                fail(where, "monomial has total degree " + std::to_string(total) +
                                ", declared degree " + std::to_string(degree));
            const Vector coeff = parse_vector(field(terms[t], "coeff", where), where + ".coeff");
            if (coeff.size() != n) fail(where + ".coeff", "expected " + std::to_string(n) + " entries");

            if (degree == 0) {
                constant += coeff;
                continue;
            }
            if (degree == 1) {
                for (int k = 0; k < n; ++k)
                    if (exps[k] == 1) linear.col(k) += coeff;
                continue;
            }
            if (degree > kMaxPolyDegree)
                fail(where + ".degree", "degree above " + std::to_string(kMaxPolyDegree));
            auto it = std::find_if(parts.begin(), parts.end(),
                                   [&](const HomPoly& p) { return p.degree() == degree; });
            if (it == parts.end()) {
                parts.emplace_back(n, degree);
                it = parts.end() - 1;
            }
            it->add_term(exps, coeff);
        }
    }
    try {
        return PolyMap(space, constant, linear, std::move(parts));
    } catch (const std::exception& e) {
        fail("map", e.what());
    }
}

Json to_json(Complex c) { return Json::array({real(c.real()), real(c.imag())}); }

Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
    return out;
}

Json to_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

Json to_json(const NormedSpace& space) {
    Json out;
    out["dim"] = space.dim();
    if (space.is_inf())
        out["p"] = "inf";
    else
        out["p"] = space.p();
    return out;
}

Json to_json(const PolyMap& map) {
    Json out;
    out["space"] = to_json(map.space());
    out["constant"] = to_json(map.constant());
    out["linear"] = to_json(map.linear());
    Json terms = Json::array();
    for (const auto& part : map.higher()) {
        for (const auto& m : part.terms()) {
            terms.push_back({{"degree", part.degree()},
                             {"monomial", m.exponents},
                             {"coeff", to_json(m.coeff)}});
        }
    }
    out["terms"] = terms;
    return out;
}

Json to_json(const RangeEstimate& e) {
    Json out;
    out["value"] = real(e.value);
    out["method"] = e.method == RangeMethod::HilbertOracle ? "hilbert-oracle" : "sphere-search";
    out["raw_value"] = real(e.raw_value);
    out["maximizer"] = to_json(e.maximizer);
    out["samples"] = e.samples;
    out["refinement_iters"] = e.refinement_iters;
    if (e.oracle) out["oracle"] = real(*e.oracle);
    return out;
}

Json to_json(const GeneratorVerdict& v) {
    Json out;
    out["verdict"] = to_string(v.verdict);
    out["tolerance"] = v.tolerance;
    out["worst_slack"] = real(v.worst_slack);
    out["worst_point"] = to_json(v.worst_point);
    out["witness"] = v.witness ? to_json(*v.witness) : Json::array();
    out["samples"] = v.samples;
    out["evaluations"] = v.evaluations;
    return out;
}

Json to_json(const PDCertificate& c) {
    Json out;
    out["verdict"] = to_string(c.verdict);
    out["theta"] = real(c.theta);
    out["a"] = real(c.a);
    out["b"] = real(c.b);
    out["epsilon"] = c.epsilon;
    Json hull = Json::array();
    for (const auto& w : c.hull_vertices) hull.push_back(to_json(w));
    out["witness"] = hull;
    out["min_slack"] = real(c.min_slack);
    out["samples"] = c.samples;
    if (!c.note.empty()) out["note"] = c.note;
    return out;
}

Json to_json(const BoundInputs& in) {
    return {{"a", real(in.a)},           {"theta", real(in.theta)}, {"F0_norm", real(in.F0_norm)},
            {"VA", real(in.VA)},         {"mT", real(in.mT)},       {"V_shift", real(in.V_shift)}};
}

Json to_json(const BoundReport& rep, bool with_rows) {
    Json out;
    out["inputs"] = to_json(rep.inputs);
    out["m_rotated"] = real(rep.m_rotated);
    out["shift_rule_gap"] = real(rep.shift_rule_gap);
    out["min_slack"] = real(rep.min_slack);
    out["min_sharp_slack"] = real(rep.min_sharp_slack);
    out["min_coarse_slack"] = real(rep.min_coarse_slack);
    out["tolerance"] = rep.tolerance;
    out["violated"] = rep.violated;
    out["samples"] = rep.rows.size();
    Json curve = Json::array();
    for (const auto& c : rep.curve())
        curve.push_back({{"r", c.r},
                         {"lhs_max", real(c.lhs_max)},
                         {"rhs_sharp", real(c.rhs_sharp)},
                         {"rhs_coarse", real(c.rhs_coarse)}});
    out["curve"] = curve;
    if (with_rows) {
        Json rows = Json::array();
        for (const auto& r : rep.rows)
            rows.push_back({real(r.r), real(r.lhs), real(r.rhs_sharp), real(r.rhs_coarse),
                            real(r.slack)});
        out["rows"] = rows;
    }
    return out;
}

Json to_json(const ChainReport& rep) {
    Json out;
    out["passed"] = rep.passed;
    out["mT"] = real(rep.mT);
    out["VT"] = real(rep.VT);
    out["coefficient_bounds"] = stage_json(rep.coefficient_bounds);
    out["harris_terms"] = stage_json(rep.harris_terms);
    out["triangle"] = stage_json(rep.triangle);
    out["partial_sum"] = stage_json(rep.partial_sum);
    out["linearized"] = stage_json(rep.linearized);
    out["closed_form"] = stage_json(rep.closed_form);
    out["concavity"] = stage_json(rep.concavity);
    out["concavity_gap_at_two"] = rep.concavity_gap_at_two;
    return out;
}

Json to_json(const FlowResult& res) {
    const auto& tr = res.trajectory;
    Json out;
    out["status"] = to_string(res.status);
    out["stop_time"] = real(res.stop_time);
    out["endpoint"] = to_json(res.endpoint());
    out["endpoint_norm"] = real(tr.norms.back());
    double peak = 0.0;
    for (double x : tr.norms) peak = std::max(peak, x);
    out["max_norm"] = real(peak);
    out["nodes"] = tr.times.size();
    out["step_stats"] = {{"accepted", tr.step_stats.accepted},
                         {"rejected", tr.step_stats.rejected},
                         {"min_dt", real(tr.step_stats.min_dt)},
                         {"max_dt", real(tr.step_stats.max_dt)}};
    out["witness"] = res.witness ? to_json(*res.witness) : Json::array();
    if (!res.message.empty()) out["message"] = res.message;
    return out;
}

Json to_json(const SweepReport& rep) {
    Json out;
    out["passed"] = rep.passed();
    out["starts"] = rep.starts;
    out["escapes"] = rep.escapes;
    out["failures"] = rep.failures;
    out["max_norm"] = real(rep.max_norm);
    out["max_start_norm"] = real(rep.max_start_norm);
    if (rep.witness_start) {
        out["witness"] = {{"start", to_json(*rep.witness_start)},
                          {"point", to_json(*rep.witness_point)},
                          {"time", real(rep.witness_time)}};
    }
    return out;
}

Json to_json(const ProbeReport& rep) {
    Json out;
    out["power_bounded"] = rep.power_bounded;
    out["power_sup"] = real(rep.power_sup);
    out["power_iterations"] = rep.power_norms.size();
    Json rows = Json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"r", r.radius}, {"r_out", real(r.r_out)}, {"invariant", r.invariant}});
    out["radii"] = rows;
    if (rep.smallest_invariant_radius)
        out["smallest_invariant_radius"] = *rep.smallest_invariant_radius;
    else
        out["smallest_invariant_radius"] = "none-found";
    return out;
}

std::string bound_curve_csv(const BoundReport& rep) {
    std::string out = "r,lhs_max,rhs_sharp,rhs_coarse\n";
    for (const auto& c : rep.curve())
        out += format_double(c.r) + ',' + format_double(c.lhs_max) + ',' +
               format_double(c.rhs_sharp) + ',' + format_double(c.rhs_coarse) + '\n';
    return out;
}

}  // namespace hologen
