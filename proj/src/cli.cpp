#include "hologen/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "hologen/bounds.hpp"
#include "hologen/certify.hpp"
#include "hologen/flows.hpp"
#include "hologen/io.hpp"
#include "hologen/numrange.hpp"
#include "hologen/parallel.hpp"

namespace hologen::cli {

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct RunConfig {
    std::string command;
    std::string input_path;
    std::string output_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int samples = 256;
    std::vector<double> shells = default_shells();
    int refine_iters = 200;
    double cert_tol = 1e-9;
    double bound_tol = 1e-9;
    double rtol = 1e-9;
    int jobs = 1;
    bool timestamp = true;
};

std::uint64_t resolve_seed(const RunConfig& cfg) {
    if (cfg.seed_given) return cfg.seed;
    if (const char* env = std::getenv("HOLOGEN_SEED")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') throw InputError("HOLOGEN_SEED: not an unsigned integer");
        return v;
    }
    return 0;
}

CertifyBudget certify_budget(const RunConfig& cfg) {
    CertifyBudget b;
    b.shells = cfg.shells;
    b.samples_per_shell = cfg.samples;
    b.refine_iters = cfg.refine_iters;
    b.tolerance = cfg.cert_tol;
    b.seed = cfg.seed;
    return b;
}

BoundGrid bound_grid(const RunConfig& cfg) {
    BoundGrid g;
    g.shells = cfg.shells;
    g.samples_per_shell = cfg.samples;
    g.seed = cfg.seed;
    g.tolerance = cfg.bound_tol;
    g.search.seed = cfg.seed;
    return g;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json envelope(const RunConfig& cfg) {
    Json out;
    out["command"] = cfg.command;
    if (!cfg.input_path.empty())
        out["input"] = std::filesystem::path(cfg.input_path).filename().string();
    out["seed"] = cfg.seed;
    if (cfg.timestamp) out["generated_at"] = utc_now();
    return out;
}

void emit(const RunConfig& cfg, const Json& doc, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    if (cfg.output_path.empty())
        out << text;
    else
        write_text_file(cfg.output_path, text);
}

PolyMap load_map(const std::string& path) {
    const Json j = load_json_file(path);
    try {
        return parse_map(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

NormedSpace parse_space_flag(const std::string& p, int dim) {
    if (p == "inf") return NormedSpace::infinity(dim);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(p, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != p.size()) throw InputError("--p: expected a number or inf, got " + p);
    try {
        return NormedSpace(dim, value);
    } catch (const std::exception& e) {
        throw InputError(std::string("--p: ") + e.what());
    }
}

// Accepts "0.3", "-0.2i", "0.3+0.1i", "0.3-1e-2i".
Complex parse_complex_literal(const std::string& text) {
    static const std::regex pure_real(R"(\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*)");
    static const std::regex pure_imag(R"(\s*([-+]?[0-9.]*(?:[eE][-+]?[0-9]+)?)i\s*)");
    static const std::regex full(
        R"(\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*([-+])\s*([0-9.]*(?:[eE][-+]?[0-9]+)?)i\s*)");
    auto num = [&](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return std::stod(s);
    };
    std::smatch m;
    try {
        if (std::regex_match(text, m, pure_real)) return {std::stod(m[1]), 0.0};
        if (std::regex_match(text, m, pure_imag)) return {0.0, num(m[1])};
        if (std::regex_match(text, m, full)) {
            const double im = num(m[3]);
            return {std::stod(m[1]), m[2] == "-" ? -im : im};
        }
    } catch (const std::exception&) {
    }
    throw InputError("--z0: cannot parse complex number \"" + text + "\"");
}

int cmd_certify_gen(const RunConfig& cfg, std::ostream& out) {
    const auto map = load_map(cfg.input_path);
    const auto verdict = certify_generator(map, certify_budget(cfg));
    Json doc = envelope(cfg);
    doc["result"] = to_json(verdict);
    emit(cfg, doc, out);
    return kOk;
}

int cmd_certify_pd(const RunConfig& cfg, double epsilon, std::ostream& out) {
    const auto map = load_map(cfg.input_path);
    PDBudget budget;
    budget.ball = certify_budget(cfg);
    budget.samples_per_shell = cfg.samples;
    const auto cert = certify_pseudo_dissipative(map, epsilon, budget);
    Json doc = envelope(cfg);
    doc["result"] = to_json(cert);
    emit(cfg, doc, out);
    return kOk;
}

int cmd_numrange(const RunConfig& cfg, const std::optional<std::string>& p_flag,
                 std::ostream& out) {
    const Json j = load_json_file(cfg.input_path);
    Matrix a;
    std::optional<NormedSpace> space;
    try {
        if (j.is_object()) {
            a = parse_matrix(j.contains("matrix") ? j["matrix"] : Json(), "matrix");
            if (j.contains("space")) space = parse_space(j["space"], "space");
        } else {
            a = parse_matrix(j, "matrix");
        }
    } catch (const InputError& e) {
        throw InputError(cfg.input_path + ": " + e.what());
    }
    if (a.rows() != a.cols()) throw InputError(cfg.input_path + ": matrix: expected a square matrix");
    const int n = static_cast<int>(a.rows());
    if (p_flag) space = parse_space_flag(*p_flag, n);
    if (!space) space = NormedSpace(n, 2.0);
    if (space->dim() != n)
        throw InputError(cfg.input_path + ": space.dim does not match the matrix size");

    SearchBudget budget;
    budget.seed = cfg.seed;
    budget.refine_iters = cfg.refine_iters;
    const auto m = m_of(*space, a, budget);
    const auto v = V_of(*space, a, budget);

    Json doc = envelope(cfg);
    Json res;
    res["space"] = to_json(*space);
    res["m"] = m.value;
    res["V"] = v.value;
    res["m_estimate"] = to_json(m);
    res["V_estimate"] = to_json(v);
    doc["result"] = res;
    emit(cfg, doc, out);
    return kOk;
}

int cmd_bound(const RunConfig& cfg, double epsilon, const std::string& curve_path,
              std::ostream& out) {
    const auto map = load_map(cfg.input_path);
    Json doc = envelope(cfg);
    Json res;

    PDCertificate cert;
    const auto gen = certify_generator(map, certify_budget(cfg));
    if (gen.verdict == Verdict::Certified) {
        cert = generator_certificate(map, gen);
        res["form"] = "generator";
    } else {
        PDBudget budget;
        budget.ball = certify_budget(cfg);
        budget.samples_per_shell = cfg.samples;
        cert = certify_pseudo_dissipative(map, epsilon, budget);
        res["form"] = "pseudo-dissipative";
    }
    res["certificate"] = to_json(cert);
    if (cert.verdict != Verdict::Certified) {
        res["stage"] = "certification";
        res["message"] = "map is not certified, growth bound not applicable";
        doc["result"] = res;
        emit(cfg, doc, out);
        return kViolation;
    }
    const auto rep = verify_growth_bound(map, cert, bound_grid(cfg));
    res["stage"] = "bound";
    res["report"] = to_json(rep);
    doc["result"] = res;
    emit(cfg, doc, out);
    if (!curve_path.empty()) write_text_file(curve_path, bound_curve_csv(rep));
    return rep.violated ? kViolation : kOk;
}

int cmd_flow(const RunConfig& cfg, const std::vector<std::string>& z0_text, double t,
             const std::string& csv_path, std::ostream& out) {
    const auto map = load_map(cfg.input_path);
    const int n = map.space().dim();
    if (static_cast<int>(z0_text.size()) != n)
        throw InputError("--z0: expected " + std::to_string(n) + " coordinates, got " +
                         std::to_string(z0_text.size()));
    Vector z0(n);
    for (int k = 0; k < n; ++k) z0[k] = parse_complex_literal(z0_text[k]);
    if (!(map.space().norm(z0) < 1.0)) throw InputError("--z0: start point must satisfy |z0| < 1");
    if (!(t >= 0.0)) throw InputError("--t: must be nonnegative");

    FlowOptions opts;
    opts.rtol = cfg.rtol;
    const auto res = integrate(map, z0, t, opts);
    Json doc = envelope(cfg);
    doc["result"] = to_json(res);
    emit(cfg, doc, out);
    if (!csv_path.empty()) write_text_file(csv_path, trajectory_csv(res.trajectory));
    return res.ok() ? kOk : kViolation;
}

int cmd_sample_gen(const RunConfig& cfg, int n, int degree, const std::string& p,
                   std::ostream& out) {
    const auto space = parse_space_flag(p, n);
    if (degree < 2 || degree > kMaxPolyDegree)
        throw InputError("--degree: expected 2.." + std::to_string(kMaxPolyDegree));
    const auto map = sample_lifted_generator(space, cfg.seed, degree);
    emit(cfg, to_json(map), out);
    return kOk;
}

struct SuiteCheck {
    const char* name = "";
    int runs = 0;
    int failures = 0;
    std::vector<int> failed_seeds;
};

enum SuiteIndex {
    kGenerator,
    kRestriction,
    kOrt,
    kCaratheodory,
    kHarris,
    kChain,
    kGrowth,
    kInvariance,
    kSuiteChecks
};

using SuiteRow = std::array<std::optional<bool>, kSuiteChecks>;

SuiteRow suite_case(const RunConfig& cfg, int k) {
    static const int dims[] = {1, 2, 4};
    static const double ps[] = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    const int n = dims[k % 3];
    const double p = ps[(k / 3) % 3];
    const NormedSpace space = std::isinf(p) ? NormedSpace::infinity(n) : NormedSpace(n, p);
    const int degree = 2 + k % 7;
    const std::uint64_t seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(k);

    SuiteRow row;
    CertifyBudget budget = certify_budget(cfg);
    budget.seed = seed;
    const auto g = sample_lifted_generator(space, seed, degree);
    const auto verdict = certify_generator(g, budget);
    row[kGenerator] = verdict.verdict == Verdict::Certified;

    // Ball and restriction verdicts must agree on a generator and on a
    // shifted copy whose linear part has positive numerical range.
    const double m = m_of(space, g.linear(), {}).value;
    const PolyMap bad(space, g.constant(),
                      g.linear() + (1.0 - m) * Matrix::Identity(n, n), g.higher());
    CertifyBudget disc_budget = budget;
    disc_budget.samples_per_shell = std::max(16, budget.samples_per_shell / 4);
    bool agree = true;
    for (const PolyMap* h : {&g, &bad}) {
        const auto ball = h == &g ? verdict : certify_generator(*h, budget);
        const auto disc = certify_by_restrictions(*h, 16, disc_budget, seed);
        agree = agree && ball.verdict == disc.verdict;
    }
    row[kRestriction] = agree;

    if (verdict.verdict != Verdict::Certified) return row;

    row[kOrt] = poly_ort_check(g, verdict, 64, seed).violations == 0;
    row[kCaratheodory] =
        caratheodory_check(herglotz_sample(seed, 1 + k % 3), 16).violations == 0;
    bool harris_ok = true;
    for (const auto& q : g.higher()) harris_ok = harris_ok && !harris_check(space, q).violated;
    row[kHarris] = harris_ok;

    const BoundGrid grid = [&] {
        auto gr = bound_grid(cfg);
        gr.seed = seed;
        return gr;
    }();
    row[kChain] = verify_intermediate_chain(g, verdict, 64, grid).passed;
    row[kGrowth] = !verify_growth_bound(g, generator_certificate(g, verdict), grid).violated;

    FlowOptions opts;
    opts.rtol = cfg.rtol;
    row[kInvariance] = invariance_sweep(g, 8, 10.0, seed, opts).passed();
    return row;
}

int cmd_verify_suite(const RunConfig& cfg, int seeds, std::ostream& out) {
    if (seeds < 1) throw InputError("--seeds: must be positive");
    std::vector<SuiteRow> rows(seeds);
    parallel_for(seeds, cfg.jobs, [&](int k) { rows[k] = suite_case(cfg, k); });

    static const char* const names[kSuiteChecks] = {
        "generator_certified", "restriction_agreement", "ort_identities", "caratheodory",
        "harris",              "intermediate_chain",    "growth_bound",   "invariance"};
    std::array<SuiteCheck, kSuiteChecks> checks;
    for (int c = 0; c < kSuiteChecks; ++c) checks[c].name = names[c];
    for (int k = 0; k < seeds; ++k) {
        for (int c = 0; c < kSuiteChecks; ++c) {
            if (!rows[k][c]) continue;
            ++checks[c].runs;
            if (!*rows[k][c]) {
                ++checks[c].failures;
                checks[c].failed_seeds.push_back(k);
            }
        }
    }

    bool all = true;
    Json res = Json::object();
    for (const auto& c : checks) {
        const bool ok = c.failures == 0;
        all = all && ok;
        res[c.name] = {{"passed", ok},
                       {"runs", c.runs},
                       {"failures", c.failures},
                       {"failed_cases", c.failed_seeds}};
    }
    Json doc = envelope(cfg);
    doc["seeds"] = seeds;
    doc["passed"] = all;
    doc["result"] = res;
    emit(cfg, doc, out);
    return all ? kOk : kViolation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certify, bound and integrate holomorphic generators on p-norm balls"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::uint64_t seed_flag = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed_flag, "Random seed (default: HOLOGEN_SEED or 0)");
        sub->add_option("-o,--output", cfg.output_path, "Write the JSON report to a file");
        sub->add_option("--samples", cfg.samples, "Samples per shell")
            ->check(CLI::PositiveNumber);
        sub->add_option("--shells", cfg.shells, "Shell radii in (0, 1)")->delimiter(',');
        sub->add_option("--refine-iters", cfg.refine_iters, "Local refinement iterations")
            ->check(CLI::PositiveNumber);
        sub->add_option("--cert-tol", cfg.cert_tol, "Certification tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--bound-tol", cfg.bound_tol, "Growth bound tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--rtol", cfg.rtol, "Integrator tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--jobs", cfg.jobs, "Worker threads (0 = all cores)")
            ->check(CLI::NonNegativeNumber);
        sub->add_flag("--no-timestamp", [&](std::int64_t) { cfg.timestamp = false; },
                      "Omit the generation time from reports");
    };

    auto* gen = app.add_subcommand("certify-gen", "Certify or refute the generator inequality");
    gen->add_option("map", cfg.input_path, "Map description (JSON)")->required();
    common(gen);

    double epsilon = 0.1;
    auto* pd = app.add_subcommand("certify-pd", "Certify pseudo-dissipativity");
    pd->add_option("map", cfg.input_path, "Map description (JSON)")->required();
    pd->add_option("--epsilon", epsilon, "Annulus width")->check(CLI::Range(1e-6, 1.0));
    common(pd);

    std::optional<std::string> p_flag;
    auto* nr = app.add_subcommand("numrange", "Estimate m(A) and V(A)");
    nr->add_option("matrix", cfg.input_path, "Matrix file (JSON)")->required();
    nr->add_option("--p", p_flag, "Norm exponent: number or inf");
    common(nr);

    std::string curve_path;
    auto* bd = app.add_subcommand("bound", "Verify the growth estimate");
    bd->add_option("map", cfg.input_path, "Map description (JSON)")->required();
    bd->add_option("--curve", curve_path, "Write per-shell curve CSV");
    bd->add_option("--epsilon", epsilon, "Annulus width for the PD fallback")
        ->check(CLI::Range(1e-6, 1.0));
    common(bd);

    std::vector<std::string> z0_text;
    double t_end = 1.0;
    std::string csv_path;
    auto* fl = app.add_subcommand("flow", "Integrate z' = G(z)");
    fl->add_option("map", cfg.input_path, "Map description (JSON)")->required();
    fl->add_option("--z0", z0_text, "Start point, one complex literal per coordinate")
        ->required()
        ->allow_extra_args(true);
    fl->add_option("--t", t_end, "Final time")->required();
    fl->add_option("--csv", csv_path, "Write the trajectory CSV");
    common(fl);

    int n = 2;
    int degree = 3;
    std::string p_text = "2";
    auto* sg = app.add_subcommand("sample-gen", "Emit a seeded lifted generator map");
    sg->add_option("--n", n, "Dimension")->check(CLI::Range(1, kMaxDim));
    sg->add_option("--degree", degree, "Polynomial degree")->check(CLI::Range(2, kMaxPolyDegree));
    sg->add_option("--p", p_text, "Norm exponent: number or inf");
    common(sg);

    int seeds = 10;
    auto* vs = app.add_subcommand("verify-suite", "Run the full property battery");
    vs->add_option("--seeds", seeds, "Number of seeded cases")->check(CLI::PositiveNumber);
    common(vs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        for (auto* sub : {gen, pd, nr, bd, fl, sg, vs}) {
            if (sub->parsed()) {
                cfg.command = sub->get_name();
                cfg.seed_given = sub->count("--seed") > 0;
            }
        }
        cfg.seed = seed_flag;
        cfg.seed = resolve_seed(cfg);
        for (double r : cfg.shells)
            if (!(r > 0.0 && r < 1.0)) throw InputError("--shells: radii must lie in (0, 1)");

        if (gen->parsed()) return cmd_certify_gen(cfg, out);
        if (pd->parsed()) return cmd_certify_pd(cfg, epsilon, out);
        if (nr->parsed()) return cmd_numrange(cfg, p_flag, out);
        if (bd->parsed()) return cmd_bound(cfg, epsilon, curve_path, out);
        if (fl->parsed()) return cmd_flow(cfg, z0_text, t_end, csv_path, out);
        if (sg->parsed()) return cmd_sample_gen(cfg, n, degree, p_text, out);
        if (vs->parsed()) return cmd_verify_suite(cfg, seeds, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hologen::cli
