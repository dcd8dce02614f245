#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cwm/copulas.hpp"
#include "cwm/csv.hpp"
#include "cwm/error.hpp"
#include "cwm/nulldist.hpp"
#include "cwm/oracle.hpp"
#include "cwm/parallel.hpp"
#include "cwm/permtest.hpp"
#include "cwm/power.hpp"
#include "cwm/version.hpp"
#include "cwm/weights.hpp"

namespace cwm::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240607;

struct TestArgs {
    std::string input;
    std::string weight = "uniform";
    std::size_t permutations = 500;
    std::uint64_t seed = kDefaultSeed;
    double alpha = 0.10;
    std::string format = "json";
};

struct TabulateArgs {
    std::string weight = "all";
    std::size_t d = 2;
    std::size_t draws = 20000;
    std::size_t n_approx = 500;
    std::string alphas = "0.15,0.10,0.05,0.01";
    std::uint64_t seed = 1;
    std::string out;
};

struct PowerArgs {
    std::string copula;
    std::string grid;
    std::string grid_k;
    std::string panel;
    std::size_t n = 50;
    std::size_t S = 300;
    std::size_t N = 250;
    double alpha = 0.10;
    std::string families = "all";
    std::uint64_t seed = 1;
    bool full_scale = false;
    std::string out;
    std::string json_path;
};

struct ValidateArgs {
    std::size_t cases = 100;
    std::uint64_t seed = 20240607;
    std::size_t max_n = 30;
    bool inject_mu2_fault = false;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_real(item));
    if (values.empty()) throw InputError("empty list '" + text + "'");
    return values;
}

// A bare family name stands for its independence member; the grid then sets
// the varied parameter.
CopulaModel parse_copula(const std::string& spec) {
    if (spec.find(':') == std::string::npos) {
        if (spec == "gaussian") return CopulaModel::gaussian(0.0);
        if (spec == "t") return CopulaModel::student_t(0.0, 1.0);
        if (spec == "gumbel") return CopulaModel::gumbel(1.0);
        if (spec == "clayton") return CopulaModel::clayton(0.0);
        if (spec == "frank") return CopulaModel::frank(0.0);
    }
    return CopulaModel::parse(spec);
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    f << contents;
    if (!f) throw InputError("failed writing '" + path + "'");
}

int cmd_test(const TestArgs& a, std::size_t threads, std::ostream& out, std::ostream& err) {
    std::ifstream f(a.input);
    if (!f) throw InputError("cannot read '" + a.input + "'");
    const Sample sample = read_sample_csv(f);
    const auto family = WeightFamily::parse(a.weight, sample.d());
    const auto pseudo = pseudo_observations(sample);
    if (pseudo.any_ties()) {
        err << "warning: tied values present; ties get the maximum rank and the permutation test stays exact\n";
    }
    const auto result = decide(permutation_test(sample, family, a.permutations, a.seed, threads), a.alpha);
    const bool rej = result.decision->reject;

    if (a.format == "json") {
        json j = {{"statistic", result.statistic},
                  {"p_value", result.p_value},
                  {"n", result.n},
                  {"d", result.d},
                  {"weight", family.name()},
                  {"permutations", result.n_permutations},
                  {"seed", result.seed},
                  {"alpha", a.alpha},
                  {"reject", rej},
                  {"input", a.input},
                  {"version", kVersion}};
        out << j.dump(2) << '\n';
    } else if (a.format == "csv") {
        out << "statistic,p_value,n,d,weight,permutations,seed,alpha,reject,version\n"
            << shortest(result.statistic) << ',' << shortest(result.p_value) << ',' << result.n << ','
            << result.d << ',' << csv_quote(family.name()) << ',' << result.n_permutations << ','
            << result.seed << ',' << shortest(a.alpha) << ',' << (rej ? "true" : "false") << ',' << kVersion
            << '\n';
    } else {
        out << "statistic    " << family.symbol() << " = " << shortest(result.statistic) << '\n'
            << "p-value      " << shortest(result.p_value) << '\n'
            << "decision     " << (rej ? "reject" : "do not reject") << " independence at alpha = "
            << shortest(a.alpha) << '\n'
            << "n, d         " << result.n << ", " << result.d << '\n'
            << "weight       " << family.name() << '\n'
            << "permutations " << result.n_permutations << '\n'
            << "seed         " << result.seed << '\n'
            << "version      " << kVersion << '\n';
    }
    return kSuccess;
}

int cmd_tabulate(const TabulateArgs& a, std::size_t threads, std::ostream& out) {
    const auto alphas = parse_list(a.alphas);
    for (const double al : alphas) {
        if (!(al > 0.0 && al < 1.0)) throw InputError("alpha " + shortest(al) + " is outside (0, 1)");
    }
    const auto families = parse_families(a.weight, a.d);
    TabulationSettings settings;
    settings.draws = a.draws;
    settings.n_approx = a.n_approx;
    settings.seed = a.seed;
    settings.threads = threads;
    const auto table = tabulate_critical_values(families, a.d, alphas, settings);

    std::ostringstream csv;
    csv << "# cwm " << kVersion << " tabulate weight=" << a.weight << " d=" << a.d << " draws=" << a.draws
        << " n_approx=" << a.n_approx << " alphas=" << a.alphas << " seed=" << a.seed << '\n';
    write_csv(table, csv);
    if (a.out.empty()) {
        out << csv.str();
        return kSuccess;
    }
    write_file(a.out, csv.str());

    json entries = json::array();
    for (const auto& e : table.entries) {
        entries.push_back({{"family", e.family}, {"alpha", e.alpha}, {"critical_value", e.critical_value}});
    }
    json j = {{"version", kVersion},
              {"command", "tabulate"},
              {"config",
               {{"weight", a.weight},
                {"d", a.d},
                {"draws", a.draws},
                {"n_approx", a.n_approx},
                {"alphas", alphas},
                {"seed", a.seed}}},
              {"out", a.out},
              {"entries", entries}};
    out << j.dump(2) << '\n';
    return kSuccess;
}

int cmd_power(PowerArgs a, std::size_t threads, std::ostream& out) {
    if (a.full_scale) {
        a.S = 1000;
        a.N = 500;
    }
    if (!a.grid.empty() && !a.grid_k.empty()) throw InputError("--grid and --grid-k are exclusive");
    const auto base = parse_copula(a.copula);
    PowerStudyConfig cfg;
    cfg.panel = a.panel.empty() ? a.copula : a.panel;
    if (!a.grid_k.empty()) {
        if (base.family() != CopulaFamily::StudentT) throw InputError("--grid-k needs a t copula");
        cfg.grid = make_grid(base, a.grid_k, GridAxis::DegreesOfFreedom);
    } else if (!a.grid.empty()) {
        cfg.grid = make_grid(base, a.grid, GridAxis::Primary);
    } else {
        cfg.grid = {{base.parameter(), base}};
    }
    cfg.n = a.n;
    cfg.S = a.S;
    cfg.N = a.N;
    cfg.alpha = a.alpha;
    cfg.families = parse_families(a.families, 2);
    cfg.seed = a.seed;
    cfg.threads = threads;
    const auto curve = run_power_study(cfg);
    const auto summary = power_summary(curve);

    json points = json::array();
    for (std::size_t g = 0; g < curve.params.size(); ++g) {
        json rates = json::object();
        for (std::size_t f = 0; f < curve.families.size(); ++f) {
            rates[curve.families[f]] = {{"rejections", curve.rejections[f][g]},
                                        {"rate", curve.rate(f, g)},
                                        {"se", curve.standard_error(f, g)}};
        }
        points.push_back({{"param", curve.params[g]}, {"model", cfg.grid[g].model.name()}, {"results", rates}});
    }
    json summary_j = {{"applicable", summary.applicable},
                      {"best", summary.best ? json(*summary.best) : json(nullptr)},
                      {"worst", summary.worst ? json(*summary.worst) : json(nullptr)},
                      {"max_gap", summary.max_gap},
                      {"gap_param", summary.gap_param}};
    json j = {{"version", kVersion},
              {"command", "power"},
              {"config",
               {{"panel", cfg.panel},
                {"copula", a.copula},
                {"grid", a.grid},
                {"grid_k", a.grid_k},
                {"n", cfg.n},
                {"S", cfg.S},
                {"N", cfg.N},
                {"alpha", cfg.alpha},
                {"families", curve.families},
                {"seed", cfg.seed}}},
              {"replicate_seed", "derive_seed(seed, bits(param), s); permutations use derive_seed(key, 1)"},
              {"points", points},
              {"summary", summary_j}};

    std::ostringstream csv;
    csv << "# cwm " << kVersion << " power copula=" << a.copula << " grid=" << (a.grid_k.empty() ? a.grid : a.grid_k)
        << (a.grid_k.empty() ? "" : " axis=k") << " n=" << cfg.n << " S=" << cfg.S << " N=" << cfg.N
        << " alpha=" << shortest(cfg.alpha) << " seed=" << cfg.seed << '\n';
    write_csv(curve, csv);
    if (!a.json_path.empty()) write_file(a.json_path, j.dump(2) + "\n");
    if (a.out.empty()) {
        out << csv.str();
    } else {
        write_file(a.out, csv.str());
        out << j.dump(2) << '\n';
    }
    return kSuccess;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
    if (a.cases < 1) throw InputError("cases must be >= 1");
    ValidationOptions opt;
    opt.cases = a.cases;
    opt.seed = a.seed;
    opt.max_n = a.max_n;
    opt.inject_mu2_fault = a.inject_mu2_fault;
    const auto report = run_validation(opt);
    out << "cwm " << kVersion << " validate cases=" << a.cases << " seed=" << a.seed << " max_n=" << a.max_n
        << " tolerance=" << shortest(opt.tolerance) << '\n';
    for (const auto& f : report.families) {
        out << (f.passed ? "PASS " : "FAIL ") << f.family << "  cases=" << f.cases
            << "  max_rel_error=" << shortest(f.max_relative_error) << '\n';
    }
    for (const auto& msg : report.failures) out << "  " << msg << '\n';
    out << (report.passed() ? "all checks passed" : "validation FAILED") << '\n';
    return report.passed() ? kSuccess : kInternalError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted Cramer-von Mises tests of independence", "cwm"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: CWM_THREADS or hardware)")->capture_default_str();

    TestArgs ta;
    auto* test = app.add_subcommand("test", "Permutation test on a CSV sample");
    test->add_option("--input,-i", ta.input, "CSV file, one observation per row")->required();
    test->add_option("--weight,-w", ta.weight, "uniform|median|tails|upper|lower|deheuvels:b1,...")
        ->capture_default_str();
    test->add_option("--permutations,-N", ta.permutations)->capture_default_str();
    test->add_option("--seed", ta.seed)->capture_default_str();
    test->add_option("--alpha", ta.alpha)->capture_default_str();
    test->add_option("--format", ta.format)->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
    test->add_option("--threads", threads);

    TabulateArgs tb;
    auto* tab = app.add_subcommand("tabulate", "Simulated asymptotic critical values");
    tab->add_option("--weight,-w", tb.weight, "family or 'all'")->capture_default_str();
    tab->add_option("--d", tb.d)->capture_default_str();
    tab->add_option("--draws", tb.draws)->capture_default_str();
    tab->add_option("--n-approx", tb.n_approx)->capture_default_str();
    tab->add_option("--alphas", tb.alphas)->capture_default_str();
    tab->add_option("--seed", tb.seed)->capture_default_str();
    tab->add_option("--out,-o", tb.out, "CSV path (stdout when omitted)");
    tab->add_option("--threads", threads);

    PowerArgs pa;
    auto* pow = app.add_subcommand("power", "Power study over a copula parameter grid");
    pow->add_option("--copula", pa.copula, "e.g. clayton, gaussian:0.4, t:0,1")->required();
    pow->add_option("--grid", pa.grid, "start:stop:step or a single value");
    pow->add_option("--grid-k", pa.grid_k, "t copula degrees of freedom grid");
    pow->add_option("--panel", pa.panel);
    pow->add_option("--n", pa.n)->capture_default_str();
    pow->add_option("--S", pa.S, "replicates per grid point")->capture_default_str();
    pow->add_option("--N", pa.N, "permutations per test")->capture_default_str();
    pow->add_option("--alpha", pa.alpha)->capture_default_str();
    pow->add_option("--families", pa.families)->capture_default_str();
    pow->add_option("--seed", pa.seed)->capture_default_str();
    pow->add_flag("--full-scale", pa.full_scale, "S=1000, N=500");
    pow->add_option("--out,-o", pa.out, "CSV path (stdout when omitted)");
    pow->add_option("--json", pa.json_path, "also write the run summary here");
    pow->add_option("--threads", threads);

    ValidateArgs va;
    auto* val = app.add_subcommand("validate", "Closed form against the brute-force oracle");
    val->add_option("--cases", va.cases)->capture_default_str();
    val->add_option("--seed", va.seed)->capture_default_str();
    val->add_option("--max-n", va.max_n)->capture_default_str();
    val->add_flag("--inject-mu2-fault", va.inject_mu2_fault)->group("");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // Help and version requests are reported as parse "errors" with exit code 0.
        return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
    }

    try {
        const std::size_t nt = resolve_threads(threads);
        if (*test) return cmd_test(ta, nt, out, err);
        if (*tab) return cmd_tabulate(tb, nt, out);
        if (*pow) return cmd_power(pa, nt, out);
        return cmd_validate(va, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace cwm::cli
