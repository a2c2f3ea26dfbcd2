#include "realdyn/cli.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "realdyn/circle.hpp"
#include "realdyn/conjugacy.hpp"
#include "realdyn/error.hpp"
#include "realdyn/families.hpp"
#include "realdyn/orbits.hpp"
#include "realdyn/scan.hpp"
#include "realdyn/sector.hpp"
#include "realdyn/symbolic.hpp"
#include "realdyn/text_format.hpp"

namespace realdyn {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

std::string num(double v) { return format_number(v == 0.0 ? 0.0 : v); }

std::string list(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ',';
        s += num(v[i]);
    }
    return s;
}

struct FamilyArgs {
    std::string family;
    std::string params;
    std::string map;

    void add(CLI::App* app)
    {
        app->add_option("--family", family, "trig, cosine, standard, exponential");
        app->add_option("--params", params, "comma separated: trig D,m,mu1..mu2m; cosine/standard a,b; exponential a");
        app->add_option("--map", map, "key=value family block, e.g. \"kind=integral_pe P=1 Q=0,1\"");
    }

    FamilyMap build() const
    {
        if (!map.empty()) {
            if (!family.empty() || !params.empty())
                throw Error(ErrorCode::InvalidParameter, "--map excludes --family/--params");
            return parse_family(map);
        }
        if (family.empty())
            throw Error(ErrorCode::InvalidParameter, "--family or --map is required");
        return family_from_params(family, parse_number_list(params));
    }
};

// Budget flags start from the defaults (or a spec file) and override only what is given.
struct BudgetArgs {
    std::optional<std::int64_t> max_iter;
    std::optional<double> cycle_eps;
    std::optional<double> tol_hyp;
    std::optional<double> tol_par;
    std::optional<int> escape_confirm;
    std::optional<int> max_period;

    void add(CLI::App* app)
    {
        app->add_option("--max-iter", max_iter, "iteration budget per singular orbit");
        app->add_option("--cycle-eps", cycle_eps, "cycle detection tolerance");
        app->add_option("--tol-hyp", tol_hyp, "|multiplier| <= 1 - tol_hyp counts as attracting");
        app->add_option("--tol-par", tol_par, "||multiplier| - 1| <= tol_par counts as parabolic");
        app->add_option("--escape-confirm", escape_confirm, "consecutive growth steps confirming escape");
        app->add_option("--max-period", max_period, "longest period searched");
    }

    Budget apply(Budget b) const
    {
        if (max_iter)
            b.max_iter = *max_iter;
        if (cycle_eps)
            b.cycle_eps = *cycle_eps;
        if (tol_hyp)
            b.tol_hyp = *tol_hyp;
        if (tol_par)
            b.tol_par = *tol_par;
        if (escape_confirm)
            b.escape_confirm = *escape_confirm;
        if (max_period)
            b.max_period = *max_period;
        b.validate();
        return b;
    }
};

std::string describe_fate(const SingularFate& fate)
{
    std::ostringstream s;
    s << "fate=" << to_string(fate.tag);
    switch (fate.tag) {
    case FateTag::Attracted:
    case FateTag::Parabolic:
        if (fate.cycle) {
            s << " period=" << fate.cycle->period << " point=" << num(fate.cycle->points.front())
              << " multiplier=" << num(fate.cycle->multiplier);
        }
        break;
    case FateTag::Escaping: s << " direction=" << to_string(fate.direction); break;
    case FateTag::Undecided: s << " reason=" << to_string(fate.reason); break;
    }
    s << " iterations=" << fate.iterations;
    return s.str();
}

std::string describe_value(const SingularValueInfo& v)
{
    std::ostringstream s;
    s << "value=" << num(v.value) << " kind=" << (v.kind == SingularKind::Critical ? "critical" : "asymptotic")
      << " source=" << num(v.source) << " multiplicity=" << v.multiplicity
      << " determined=" << (v.determined ? "true" : "false") << " on_circle=" << (v.on_circle ? "true" : "false");
    return s.str();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::InvalidParameter, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << data))
        throw Error(ErrorCode::InvalidParameter, "cannot write " + path);
}

RotationAngle parse_angle(const std::string& text)
{
    const auto slash = text.find('/');
    if (slash == std::string::npos)
        return RotationAngle::real(parse_number(text));
    std::size_t used = 0;
    try {
        const auto p = std::stoll(text.substr(0, slash), &used);
        if (used != slash)
            throw std::invalid_argument(text);
        const auto rest = text.substr(slash + 1);
        const auto q = std::stoll(rest, &used);
        if (used != rest.size())
            throw std::invalid_argument(text);
        return RotationAngle::rational(p, q);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::ParseError, "bad rotation '" + text + "'");
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Singular-orbit classification, kneading data and parameter scans for real transcendental maps",
                 "realdyn"};
    app.require_subcommand(1);

    // classify
    auto* classify = app.add_subcommand("classify", "classify the singular orbits of one map");
    FamilyArgs classify_family;
    BudgetArgs classify_budget;
    classify_family.add(classify);
    classify_budget.add(classify);

    // kneading
    auto* knead = app.add_subcommand("kneading", "itineraries of the singular values");
    FamilyArgs knead_family;
    BudgetArgs knead_budget;
    int depth = 30;
    double snap = kDefaultSnap;
    knead_family.add(knead);
    knead_budget.add(knead);
    knead->add_option("--depth", depth, "itinerary length")->capture_default_str();
    knead->add_option("--snap", snap, "critical-point snapping distance")->capture_default_str();

    // crit
    auto* crit = app.add_subcommand("crit", "critical points and singular values");
    FamilyArgs crit_family;
    double crit_lo = -10.0;
    double crit_hi = 10.0;
    crit_family.add(crit);
    crit->add_option("--lo", crit_lo, "search window for line maps")->capture_default_str();
    crit->add_option("--hi", crit_hi, "search window for line maps")->capture_default_str();

    // rotation
    auto* rotation = app.add_subcommand("rotation", "rotation number of a degree-one trig lift");
    FamilyArgs rotation_family;
    double t0 = 0.0;
    std::int64_t rotation_n = 100000;
    bool interval = false;
    std::vector<double> tongue;
    rotation_family.add(rotation);
    rotation->add_option("--t0", t0, "starting point")->capture_default_str();
    rotation->add_option("-n,--iterations", rotation_n, "iterations")->capture_default_str();
    rotation->add_flag("--interval", interval, "also report the envelope rotation interval");
    rotation->add_option("--tongue", tongue, "mu1_lo,mu1_hi,n1,mu2_lo,mu2_hi,n2: Arnol'd family CSV")
        ->delimiter(',')
        ->expected(6);

    // sector
    auto* sector = app.add_subcommand("sector", "sector growth tests along the escaping directions");
    FamilyArgs sector_family;
    BudgetArgs sector_budget;
    std::string test = "log";
    double k = 1.0, r = 2.0, x_max = 1e3;
    int sector_n = 10000;
    double m = 10.0, theta = 0.1, x0 = 10.0, x_cap = 0.0;
    int grid = 64;
    std::string violations;
    sector_family.add(sector);
    sector_budget.add(sector);
    sector->add_option("--test", test, "log or geometric")
        ->check(CLI::IsMember({"log", "geometric"}))
        ->capture_default_str();
    sector->add_option("--k", k, "log-derivative constant K")->capture_default_str();
    sector->add_option("--r", r, "log-derivative lower bound r")->capture_default_str();
    sector->add_option("--x-max", x_max, "log-derivative upper bound")->capture_default_str();
    sector->add_option("-n,--samples", sector_n, "log-derivative sample count")->capture_default_str();
    sector->add_option("--m", m, "geometric modulus bound M")->capture_default_str();
    sector->add_option("--theta", theta, "geometric sector slope")->capture_default_str();
    sector->add_option("--x0", x0, "geometric sector start")->capture_default_str();
    sector->add_option("--x-cap", x_cap, "geometric sector end (default 1000 x0)");
    sector->add_option("--grid", grid, "geometric grid size")->capture_default_str();
    sector->add_option("--violations", violations, "write violating samples as CSV");

    // scan
    auto* scan = app.add_subcommand("scan", "parameter-plane scan from a spec file");
    BudgetArgs scan_budget;
    std::string spec_path, image_path, csv_path;
    unsigned workers = 0;
    std::optional<int> width, height;
    scan->add_option("--spec", spec_path, "spec file")->required();
    scan->add_option("--out", image_path, "PGM or PPM output, by palette");
    scan->add_option("--csv", csv_path, "per-cell CSV output");
    scan->add_option("--workers", workers, "worker threads, 0 = hardware")->capture_default_str();
    scan->add_option("--width", width, "override the spec width");
    scan->add_option("--height", height, "override the spec height");
    scan_budget.add(scan);

    // conjugate
    auto* conjugate = app.add_subcommand("conjugate", "rotation, translation and affine conjugates");
    FamilyArgs conj_family;
    std::string beta;
    bool normalize = false;
    std::string other_params;
    conj_family.add(conjugate);
    conjugate->add_option("--rotation", beta, "conjugate a trig lift by t -> t + beta (p/q or decimal)");
    conjugate->add_flag("--normalize", normalize, "remove the constant term of a D != 1 trig lift");
    conjugate->add_option("--with", other_params, "params of a second map of the same family: affine check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*classify) {
            const auto f = classify_family.build();
            const auto mc = classify_map(f, classify_budget.apply({}));
            out << format_family(f) << '\n';
            out << "class=" << to_string(mc.tag) << '\n';
            out << "singular_values=" << mc.singular_values.size() << '\n';
            for (std::size_t i = 0; i < mc.fates.size(); ++i)
                out << describe_value(mc.singular_values[i]) << ' ' << describe_fate(mc.fates[i]) << '\n';
        } else if (*knead) {
            if (depth < 0)
                throw Error(ErrorCode::InvalidParameter, "--depth must be >= 0");
            const auto f = knead_family.build();
            out << format_kneading(kneading(f, depth, knead_budget.apply({}), snap));
        } else if (*crit) {
            const auto f = crit_family.build();
            out << format_family(f) << '\n';
            if (f.kind() == FamilyKind::TrigLift) {
                const auto set = critical_points_circle(f.trig());
                out << "roots=" << set.roots.size() << " on_circle=" << set.on_circle.size()
                    << " off_circle=" << set.off_circle.size() << '\n';
                for (std::size_t i = 0; i < set.roots.size(); ++i) {
                    out << "root re=" << num(set.roots[i].real()) << " im=" << num(set.roots[i].imag())
                        << " residual=" << num(set.residuals[i]) << '\n';
                }
                for (const auto& c : set.on_circle)
                    out << "critical t=" << num(c.t) << " multiplicity=" << c.multiplicity << '\n';
            } else if (f.closed_form()) {
                if (!(crit_lo < crit_hi))
                    throw Error(ErrorCode::InvalidParameter, "--lo must be below --hi");
                for (const auto& c : critical_points_real(f, crit_lo, crit_hi))
                    out << "critical x=" << num(c.x) << " multiplicity=" << c.multiplicity << '\n';
            }
            for (const auto& v : singular_values(f))
                out << "singular " << describe_value(v) << '\n';
        } else if (*rotation) {
            if (!tongue.empty()) {
                const auto n1 = static_cast<int>(tongue[2]);
                const auto n2 = static_cast<int>(tongue[5]);
                if (n1 < 1 || n2 < 1 || n1 != tongue[2] || n2 != tongue[5])
                    throw Error(ErrorCode::InvalidParameter, "--tongue grid sizes must be positive integers");
                out << tongue_csv(tongue_scan(tongue[0], tongue[1], n1, tongue[3], tongue[4], n2, rotation_n));
            } else {
                const auto f = rotation_family.build();
                const auto est = rotation_number(f, t0, rotation_n);
                out << "rho=" << num(est.value) << " error_bound=" << num(est.error_bound) << " n=" << est.n
                    << " monotone=" << (est.monotone ? "true" : "false") << '\n';
                if (interval) {
                    const auto iv = rotation_interval(f, rotation_n);
                    out << "rho_minus=" << num(iv.lower) << " rho_plus=" << num(iv.upper) << '\n';
                }
            }
        } else if (*sector) {
            const auto f = sector_family.build();
            const auto b = sector_budget.apply({});
            const auto report = test == "log" ? check_log_derivative(f, k, r, x_max, sector_n, b)
                                              : check_sector_geometric(f, m, theta, x0, grid, x_cap, b);
            out << format_sector_report(report);
            if (!violations.empty())
                write_file(violations, sector_violations_csv(report));
        } else if (*scan) {
            auto spec = parse_scan_spec(read_file(spec_path));
            if (width)
                spec.width = *width;
            if (height)
                spec.height = *height;
            spec.budget = scan_budget.apply(spec.budget);
            spec.validate();
            const auto result = run_scan(spec, workers);
            if (!image_path.empty())
                write_file(image_path, spec.palette == Palette::Color ? export_ppm(result) : export_pgm(result));
            if (!csv_path.empty())
                write_file(csv_path, export_csv(result));
            std::array<int, 5> counts{};
            for (const auto& c : result.cells)
                ++counts[static_cast<std::size_t>(c.cls)];
            out << "width=" << spec.width << " height=" << spec.height << '\n';
            for (auto c : {CellClass::Hyperbolic, CellClass::RealHyperbolic, CellClass::NotDecided,
                           CellClass::CandidateNonHyperbolic, CellClass::Invalid})
                out << to_string(c) << '=' << counts[static_cast<std::size_t>(c)] << '\n';
            err << "workers=" << result.workers << " seconds=" << result.seconds << '\n';
        } else if (*conjugate) {
            const auto f = conj_family.build();
            const int modes = (!beta.empty()) + normalize + (!other_params.empty());
            if (modes != 1)
                throw Error(ErrorCode::InvalidParameter, "give exactly one of --rotation, --normalize, --with");
            if (!other_params.empty()) {
                const auto g = family_from_params(std::string(to_string(f.kind())), parse_number_list(other_params));
                const auto h = affine_conjugacy_check(f, g);
                if (h)
                    out << "affine=found scale=" << num(h->scale) << " shift=" << num(h->shift) << '\n';
                else
                    out << "affine=none\n";
            } else {
                if (f.kind() != FamilyKind::TrigLift)
                    throw Error(ErrorCode::KindMismatch, "rotation and translation conjugates need a trig lift");
                const auto& p = f.as<TrigLiftParams>();
                if (normalize) {
                    const auto poly = normalize_translation(p.degree, p.modality, p.mu);
                    out << "mu=" << list(poly.to_mu()) << " leakage=" << num(poly.leakage()) << '\n';
                } else {
                    const auto c = conjugate_by_rotation(p.degree, p.modality, p.mu, parse_angle(beta));
                    out << "in_delta=" << (c.in_delta ? "true" : "false") << '\n';
                    out << "mu=" << list(c.mu) << " leakage=" << num(c.leakage) << '\n';
                }
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (!is_validation_error(e.code()))
            return kExitNumerical;
        err << app.get_subcommands().front()->help();
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace realdyn
