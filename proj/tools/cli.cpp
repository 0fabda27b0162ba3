#include "cli.hpp"

#include <lcsharp/lcsharp.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

namespace lcsharp::cli {

namespace {

struct Context {
    QuadratureConfig quad;
    std::uint64_t seed = 20240601;
};

// Thrown for bad input detected after argument parsing.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json tolerances_of(const QuadratureConfig& q)
{
    return json{{"abs_tol", q.abs_tol}, {"rel_tol", q.rel_tol}};
}

std::vector<std::pair<double, double>> rows_of(const std::vector<ProfilePoint>& profile)
{
    std::vector<std::pair<double, double>> rows;
    rows.reserve(profile.size());
    for (const auto& p : profile) rows.emplace_back(p.x, p.value);
    return rows;
}

json profile_json(const std::vector<ProfilePoint>& profile)
{
    json arr = json::array();
    for (const auto& p : profile) arr.push_back({p.x, p.value});
    return arr;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f) throw usage_error("cannot open '" + path + "' for writing");
    f << text;
}

void apply_config_file(const std::string& path, QuadratureConfig& q)
{
    std::ifstream in(path);
    if (!in) throw usage_error("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos)
            throw usage_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        try {
            if (key == "abs_tol")
                q.abs_tol = std::stod(value);
            else if (key == "rel_tol")
                q.rel_tol = std::stod(value);
            else if (key == "max_refinements")
                q.max_refinements = std::stoi(value);
            else if (key == "tail_cutoff_log")
                q.tail_cutoff_log = std::stod(value);
            else
                throw usage_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const std::logic_error&) {
            throw usage_error(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
        }
    }
}

std::vector<double> parse_weights(const std::string& text)
{
    std::vector<double> w;
    const auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && text[first] == '[') {
        try {
            w = json::parse(text).get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw usage_error(std::string("--weights: invalid JSON array: ") + e.what());
        }
        return w;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::logic_error&) {
            throw usage_error("--weights: '" + item + "' is not a number");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw usage_error("--weights: '" + item + "' is not a number");
        w.push_back(v);
    }
    return w;
}

json report_json(const SignChangeReport& r)
{
    json unresolved = json::array();
    for (const auto& [a, b] : r.unresolved) unresolved.push_back({a, b});
    return json{{"crossings", r.crossings},
                {"pattern", r.pattern_string()},
                {"resolution", r.resolution},
                {"certified", r.certified},
                {"unresolved", unresolved}};
}

// ---------------------------------------------------------------------------

OutputRecord cmd_constant(const Context& ctx, const std::string& which, double p, std::optional<double> q)
{
    OutputRecord r{"constant"};
    r.inputs = {{"which", which}, {"p", p}};
    if (q) r.inputs["q"] = *q;
    r.tolerances = tolerances_of(ctx.quad);
    double value;
    if (which == "lp-l1-lower")
        value = lp_l1_lower(p);
    else if (which == "lp-l1-upper")
        value = lp_l1_upper(p, ctx.quad);
    else if (which == "lp-l2-lower")
        value = lp_l2_lower(p);
    else {
        if (!q) throw usage_error("constant --which lp-lq requires --q");
        value = lp_lq_ratio(p, *q, ctx.quad);
    }
    r.outputs["value"] = value;
    return r;
}

OutputRecord cmd_p0(const Context& ctx)
{
    OutputRecord r{"p0"};
    r.tolerances = tolerances_of(ctx.quad);
    r.tolerances["residual"] = 1e-12;
    const auto t = find_p0(2.0, 4.0, ctx.quad);
    const double hl = h(2.9414, ctx.quad), hr = h(2.9415, ctx.quad);
    r.outputs = {{"p0", t.p0},
                 {"residual", t.residual},
                 {"h_2_9414", hl},
                 {"h_2_9415", hr},
                 {"c_p0", c_p(t.p0, ctx.quad)},
                 {"A_p0", std::pow(2.0, t.p0) * std::exp(-t.p0) * gamma(t.p0 + 1.0) * (t.p0 - 1.0)}};
    const bool ok = std::abs(t.residual) < 1e-12 && t.p0 > 2.9414 && t.p0 < 2.9415 && hl > 1e-5 && hr < -1e-5;
    r.status = ok ? Status::ok : Status::violated;
    return r;
}

OutputRecord cmd_scan(const Context& ctx, double p, int grid, const std::string& csv)
{
    OutputRecord r{"scan"};
    r.inputs = {{"p", p}, {"grid", grid}};
    r.tolerances = tolerances_of(ctx.quad);
    r.tolerances["endpoint_tie"] = 1e-8;
    if (grid < 100) throw std::domain_error("scan: --grid must be >= 100");
    const auto s = scan_family_extrema(p, static_cast<std::size_t>(grid), ctx.quad);
    r.outputs = {{"mode", s.minimised ? "min" : "max"},
                 {"argopt_t", s.argopt},
                 {"opt_value", s.opt_value},
                 {"gamma_norm", gamma_norm(p)}};
    if (p >= 1.0) r.outputs["c_p"] = c_p(p, ctx.quad);
    r.outputs["profile"] = profile_json(s.profile);
    if (!csv.empty()) {
        write_file(csv, profile_csv(rows_of(s.profile), "t", "norm"));
        r.outputs["csv"] = csv;
    }
    return r;
}

OutputRecord cmd_scan_l2(const Context& ctx, double p, int grid, const std::string& csv)
{
    OutputRecord r{"scan-l2"};
    r.inputs = {{"p", p}, {"grid", grid}};
    r.tolerances = tolerances_of(ctx.quad);
    if (grid < 3) throw std::domain_error("scan-l2: --grid must be >= 3");
    const auto s = scan_l2_ratio(p, static_cast<std::size_t>(grid), ctx.quad);
    const auto kind = classify_l2_extremiser(s.argopt);
    r.outputs = {{"mode", s.minimised ? "min" : "max"},
                 {"argopt_s", s.argopt},
                 {"opt_value", s.opt_value},
                 {"extremiser", kind == L2Extremiser::symmetric   ? "symmetric"
                                : kind == L2Extremiser::one_sided ? "one-sided"
                                                                  : "interior"},
                 {"profile", profile_json(s.profile)}};
    if (!csv.empty()) {
        write_file(csv, profile_csv(rows_of(s.profile), "s", "ratio"));
        r.outputs["csv"] = csv;
    }
    return r;
}

OutputRecord cmd_moment(const Context& ctx, double p, double t, bool normalized)
{
    OutputRecord r{"moment"};
    r.inputs = {{"p", p}, {"t", t}, {"normalized", normalized}};
    r.tolerances = tolerances_of(ctx.quad);
    const double raw = moment_et(p, t, ctx.quad);
    const double mu = family_scale(t);
    r.outputs["mu_t"] = mu;
    r.outputs["moment"] = normalized ? raw / std::pow(mu, p) : raw;
    if (p != 0.0) r.outputs["norm"] = normalized ? norm_ebar(p, t, ctx.quad) : std::pow(raw, 1.0 / p);
    return r;
}

OutputRecord cmd_slice(const Context& ctx, const std::string& weights, bool volume, bool project,
                       const std::string& method)
{
    OutputRecord r{"slice"};
    r.inputs = {{"weights", weights}, {"volume", volume}, {"project", project}, {"method", method}};
    r.tolerances = tolerances_of(ctx.quad);
    r.tolerances["section_bound_slack"] = 1e-9;
    auto raw = parse_weights(weights);
    if (volume && raw.size() < 3)
        throw std::domain_error("slice --volume: requires n >= 2 (got n = " +
                                std::to_string(static_cast<long>(raw.size()) - 1) + ")");
    const auto a = project ? WeightVector::projected(std::move(raw)) : WeightVector::strict(std::move(raw));
    const std::size_t n = a.dimension();
    const DensityMethod m = method == "residue"         ? DensityMethod::residue
                            : method == "cross-checked" ? DensityMethod::cross_checked
                                                        : DensityMethod::fourier;
    const double f0 = density_at_zero(a, m, ctx.quad);
    r.outputs["weights"] = a.vector();
    r.outputs["density_at_zero"] = f0;
    r.outputs["bound"] = 1.0 / std::numbers::sqrt2;
    if (volume) {
        r.outputs["n"] = n;
        r.outputs["volume"] = section_volume_factor(n) * f0;
        if (n == 2 || n == 3) r.outputs["geometry_volume"] = geometry_oracle_volume(a, n);
    }
    r.status = f0 <= 1.0 / std::numbers::sqrt2 + 1e-9 ? Status::ok : Status::violated;
    return r;
}

OutputRecord cmd_max_section(const Context& ctx, int n, int restarts, std::uint64_t seed)
{
    OutputRecord r{"max-section"};
    r.inputs = {{"n", n}, {"restarts", restarts}, {"seed", seed}};
    r.tolerances = tolerances_of(ctx.quad);
    r.tolerances["section_bound_slack"] = 1e-9;
    if (n < 2) throw std::domain_error("max-section: requires n >= 2");
    if (restarts < 20) throw std::domain_error("max-section: requires restarts >= 20");
    const auto o = maximize_section(static_cast<std::size_t>(n), static_cast<std::size_t>(restarts), seed, {},
                                    ctx.quad);
    const double bound = 1.0 / std::numbers::sqrt2;
    r.outputs = {{"a_star", o.a_star},
                 {"value", o.value},
                 {"bound", bound},
                 {"max_evaluated", o.max_evaluated},
                 {"evaluations", o.evaluations},
                 {"orbit_distance", o.orbit_distance}};
    r.status = o.max_evaluated <= bound + 1e-9 ? Status::ok : Status::violated;
    return r;
}

OutputRecord cmd_crossings(const Context& ctx, double t, int grid)
{
    OutputRecord r{"crossings"};
    r.inputs = {{"t", t}, {"grid", grid}};
    r.tolerances = tolerances_of(ctx.quad);
    r.tolerances["zero_band"] = 1e-12;
    if (grid < 1000) throw std::domain_error("crossings: --grid must be >= 1000");
    try {
        const auto c = verify_3crossings(t, static_cast<std::size_t>(grid));
        r.outputs = {{"upper", report_json(c.upper)}, {"lower", report_json(c.lower)}};
    } catch (const crossing_pattern_error& e) {
        r.outputs = {{"message", e.what()}, {"offending", report_json(e.report())}};
        r.status = Status::violated;
    }
    return r;
}

// ---------------------------------------------------------------------------
// verify suites

struct CheckList {
    json items = json::array();
    int failed = 0;

    void add(std::string name, bool holds, json detail = json::object())
    {
        detail["name"] = std::move(name);
        detail["holds"] = holds;
        failed += !holds;
        items.push_back(std::move(detail));
    }
};

void suite_reduction(const Context& ctx, CheckList& out)
{
    for (const auto& f : standard_catalogue())
        for (double p : {-0.5, 0.5, 1.0, 2.0, 3.0, 4.0}) {
            const auto res = reduction_check(f, p, 1e-8, ctx.quad);
            out.add(f.name() + " p=" + json(p).dump(), res.holds, {{"lhs", res.lhs}, {"rhs", res.rhs}});
        }
}

void suite_fradelizi(const Context& ctx, CheckList& out)
{
    for (const auto& f : standard_catalogue())
        for (const auto& phi : convex_catalogue()) {
            const auto res = fradelizi_check(f, phi, 1e-8, ctx.quad);
            out.add(f.name() + " " + phi.name(), res.holds, {{"lhs", res.lhs}, {"rhs", res.rhs}});
        }
}

void suite_crossings(const Context& ctx, CheckList& out)
{
    for (int i = 1; i <= 99; ++i) {
        const double t = i / 100.0;
        try {
            const auto c = verify_3crossings(t);
            out.add("3-crossings t=" + json(t).dump(), true,
                    {{"upper", c.upper.pattern_string()}, {"lower", c.lower.pattern_string()}});
        } catch (const crossing_pattern_error& e) {
            out.add("3-crossings t=" + json(t).dump(), false, {{"message", e.what()}});
        }
    }
    for (double t : {0.1, 0.5, 0.9})
        for (double p : {-0.5, 2.0, 3.5}) {
            const auto d = nonneg_decomposition_check(t, p, 1e-9, 10000, ctx.quad);
            out.add("decomposition t=" + json(t).dump() + " p=" + json(p).dump(), d.holds,
                    {{"q", d.q}, {"min_product", d.min_product}, {"argmin", d.argmin}});
        }
}

void suite_constants(const Context& ctx, CheckList& out)
{
    const auto t = find_p0(2.0, 4.0, ctx.quad);
    out.add("p0 in (2.9414, 2.9415)", t.p0 > 2.9414 && t.p0 < 2.9415 && std::abs(t.residual) < 1e-12,
            {{"p0", t.p0}, {"residual", t.residual}});
    out.add("h(2.9414) > 1e-5", h(2.9414, ctx.quad) > 1e-5);
    out.add("h(2.9415) < -1e-5", h(2.9415, ctx.quad) < -1e-5);
    for (double p : {-0.9, -0.5, 0.5, 1.0}) {
        const auto s = scan_family_extrema(p, 1000, ctx.quad);
        out.add("scan min p=" + json(p).dump(), s.argopt == 1.0 && std::abs(s.opt_value - gamma_norm(p)) <= 1e-8,
                {{"argopt", s.argopt}, {"value", s.opt_value}});
    }
    for (double p : {1.5, 2.0, 2.5, 3.5, 4.0, 6.0}) {
        const auto s = scan_family_extrema(p, 1000, ctx.quad);
        const double expected_t = p < t.p0 ? 1.0 : 0.0;
        out.add("scan max p=" + json(p).dump(),
                s.argopt == expected_t && std::abs(s.opt_value - c_p(p, ctx.quad)) <= 1e-8,
                {{"argopt", s.argopt}, {"value", s.opt_value}});
    }
    const double a = std::pow(2.0, t.p0) * std::exp(-t.p0) * gamma(t.p0 + 1.0) * (t.p0 - 1.0);
    out.add("A_p0 = 4.39 +- 0.01", std::abs(a - 4.39) <= 0.01, {{"value", a}});
    const auto tr = locate_l2_transition(1.05, 1.95, 1e-4, 201, ctx.quad);
    out.add("p* = 1.68 +- 0.02", std::abs(tr.p_star - 1.68) <= 0.02, {{"value", tr.p_star}});
}

void suite_mc(const Context& ctx, std::uint64_t seed, std::uint64_t samples, CheckList& out)
{
    McConfig mc;
    mc.seed = seed;
    mc.samples = samples;
    auto add = [&](const std::string& name, const McEstimate& e, double target) {
        out.add(name, e.within(target),
                {{"estimate", e.estimate}, {"standard_error", e.standard_error}, {"target", target}});
    };
    add("X_{1,1} mean", sample_xab({1.0, 1.0}, mc).mean_of([](double x) { return x; }), 0.0);
    add("X_{1,0.5} E|X|", estimate_abs_moment(sample_xab({1.0, 0.5}, mc), 1.0), abs_mean_xab({1.0, 0.5}));
    add("X_{1,0.5} variance", estimate_abs_moment(sample_xab({1.0, 0.5}, mc), 2.0), 1.25);
    add("E_1 p=2", estimate_abs_moment(sample_family(1.0, true, mc), 2.0), 2.0);
    add("normalized t=0.2 p=3", estimate_abs_moment(sample_family(0.2, true, mc), 3.0),
        std::pow(norm_ebar(3.0, 0.2, ctx.quad), 3.0));
    add("t=0 p=4", estimate_abs_moment(sample_family(0.0, false, mc), 4.0), 9.0);
    for (const auto& w : {WeightVector::projected({1.0, -1.0}), WeightVector::projected({1.0, 0.0, -1.0}),
                          WeightVector::projected({2.0, -1.0, -1.0})}) {
        add("density at 0 " + json(w.vector()).dump(), estimate_density_at_zero(w, mc),
            density_at_zero(w, DensityMethod::fourier, ctx.quad));
    }
}

OutputRecord cmd_verify(const Context& ctx, const std::string& suite, std::uint64_t seed, std::uint64_t samples)
{
    OutputRecord r{"verify"};
    r.inputs = {{"suite", suite}};
    r.tolerances = tolerances_of(ctx.quad);
    CheckList checks;
    if (suite == "reduction") {
        r.tolerances["inequality"] = 1e-8;
        suite_reduction(ctx, checks);
    } else if (suite == "fradelizi") {
        r.tolerances["inequality"] = 1e-8;
        suite_fradelizi(ctx, checks);
    } else if (suite == "crossings") {
        r.tolerances["zero_band"] = 1e-12;
        r.tolerances["product_slack"] = 1e-9;
        suite_crossings(ctx, checks);
    } else if (suite == "constants") {
        r.tolerances["scan"] = 1e-8;
        suite_constants(ctx, checks);
    } else {
        r.inputs["seed"] = seed;
        r.inputs["samples"] = samples;
        r.tolerances["standard_errors"] = 3;
        suite_mc(ctx, seed, samples, checks);
    }
    r.outputs = {{"checks", checks.items},
                 {"passed", static_cast<int>(checks.items.size()) - checks.failed},
                 {"failed", checks.failed}};
    r.status = checks.failed == 0 ? Status::ok : Status::violated;
    return r;
}

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("LCSHARP_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::logic_error&) {
            throw usage_error(std::string("LCSHARP_SEED is not an integer: '") + env + "'");
        }
    }
    return 20240601;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sharp moment comparison constants for log-concave variables", "lcsharp"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::optional<double> tol;
    std::string config_path;
    app.add_option("--tol", tol, "Relative quadrature tolerance (absolute tolerance is tol/100)")
        ->check(CLI::PositiveNumber);
    app.add_option("--config", config_path, "key=value file overriding quadrature settings");

    auto* constant = app.add_subcommand("constant", "Constants of the moment comparison inequalities");
    std::string which;
    double cp = 0;
    std::optional<double> cq;
    constant->add_option("--which", which)
        ->required()
        ->check(CLI::IsMember({"lp-l1-lower", "lp-l1-upper", "lp-l2-lower", "lp-lq"}));
    constant->add_option("--p", cp)->required();
    constant->add_option("--q", cq);

    auto* p0 = app.add_subcommand("p0", "Transition order p0 where the two branches of C_p meet");

    auto* scan = app.add_subcommand("scan", "Scan t -> ||E_t / mu_t||_p over [0, 1]");
    double sp = 0;
    int sgrid = 1000;
    std::string scsv;
    scan->add_option("--p", sp)->required();
    scan->add_option("--grid", sgrid);
    scan->add_option("--csv", scsv, "Write the profile as CSV");

    auto* scan_l2 = app.add_subcommand("scan-l2", "Scan s -> ||Z_s||_p / ||Z_s||_2");
    double lp = 0;
    int lgrid = 1001;
    std::string lcsv;
    scan_l2->add_option("--p", lp)->required();
    scan_l2->add_option("--grid", lgrid);
    scan_l2->add_option("--csv", lcsv, "Write the profile as CSV");

    auto* moment = app.add_subcommand("moment", "E|E_t|^p, or of E_t / mu_t with --normalized");
    double mp = 0, mt = 0;
    bool normalized = false;
    moment->add_option("--p", mp)->required();
    moment->add_option("--t", mt)->required();
    moment->add_flag("--normalized", normalized);

    auto* slice = app.add_subcommand("slice", "Density at zero of sum a_j E_j and the simplex section");
    std::string weights, method = "fourier";
    bool volume = false, project = false;
    slice->add_option("--weights", weights, "Comma-separated list or JSON array")->required();
    slice->add_flag("--volume", volume);
    slice->add_flag("--project", project, "Project onto sum 0 and normalise instead of validating");
    slice->add_option("--method", method)->check(CLI::IsMember({"fourier", "residue", "cross-checked"}));

    auto* max_section = app.add_subcommand("max-section", "Maximise the central section volume");
    int xn = 0, restarts = 20;
    std::optional<std::uint64_t> xseed;
    max_section->add_option("--n", xn)->required();
    max_section->add_option("--restarts", restarts);
    max_section->add_option("--seed", xseed);

    auto* crossings = app.add_subcommand("crossings", "Certify the three crossings at t");
    double ct = 0;
    int cgrid = 4000;
    crossings->add_option("--t", ct)->required();
    crossings->add_option("--grid", cgrid);

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    std::string suite;
    std::optional<std::uint64_t> vseed;
    std::uint64_t samples = 1'000'000;
    verify->add_option("--suite", suite)
        ->required()
        ->check(CLI::IsMember({"reduction", "fradelizi", "crossings", "constants", "mc"}));
    verify->add_option("--seed", vseed);
    verify->add_option("--samples", samples, "Monte Carlo sample count (mc suite)");

    std::vector<std::string> argv_store;
    argv_store.emplace_back("lcsharp");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "lcsharp: " << e.what() << "\n";
        return exit_usage;
    }

    OutputRecord record;
    record.command = app.get_subcommands().front()->get_name();
    try {
        Context ctx;
        if (!config_path.empty()) apply_config_file(config_path, ctx.quad);
        if (tol) {
            ctx.quad.rel_tol = *tol;
            ctx.quad.abs_tol = *tol / 100.0;
        }
        ctx.quad.validate();
        ctx.seed = default_seed();

        if (constant->parsed())
            record = cmd_constant(ctx, which, cp, cq);
        else if (p0->parsed())
            record = cmd_p0(ctx);
        else if (scan->parsed())
            record = cmd_scan(ctx, sp, sgrid, scsv);
        else if (scan_l2->parsed())
            record = cmd_scan_l2(ctx, lp, lgrid, lcsv);
        else if (moment->parsed())
            record = cmd_moment(ctx, mp, mt, normalized);
        else if (slice->parsed())
            record = cmd_slice(ctx, weights, volume, project, method);
        else if (max_section->parsed())
            record = cmd_max_section(ctx, xn, restarts, xseed.value_or(ctx.seed));
        else if (crossings->parsed())
            record = cmd_crossings(ctx, ct, cgrid);
        else
            record = cmd_verify(ctx, suite, vseed.value_or(ctx.seed), samples);
    } catch (const std::exception& e) {
        record.status = Status::error;
        record.outputs = {{"message", e.what()}};
        out << record.serialize() << "\n";
        err << "lcsharp " << record.command << ": " << e.what() << "\n";
        return exit_usage;
    }
    out << record.serialize() << "\n";
    return record.status == Status::ok ? exit_ok : exit_violated;
}

} // namespace lcsharp::cli
