#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ncg/algebra.hpp"
#include "ncg/circle.hpp"
#include "ncg/coverings.hpp"
#include "ncg/dixmier.hpp"
#include "ncg/json_io.hpp"
#include "ncg/report.hpp"
#include "ncg/rng.hpp"
#include "ncg/spectral_triple.hpp"

namespace {

using namespace ncg;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << text;
}

unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned def = hw < 4 ? hw : 4;
    if (const char* env = std::getenv("NCG_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v <= 64) return static_cast<unsigned>(v);
    }
    return def;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// sparse random element with support radius <= radius and a few terms
AlgebraElement sparse_random(DeformationAngle theta, std::int64_t radius,
                             SplitMix64& rng) {
    AlgebraElement out = zero_element(theta);
    const int terms = 3 + static_cast<int>(rng.next_below(5));
    for (int i = 0; i < terms; ++i) {
        const auto r = rng.next_range(-radius, radius);
        const auto s = rng.next_range(-radius, radius);
        out.accumulate(MonomialIndex{r, s}, rng.next_complex());
    }
    if (out.empty()) out.accumulate(MonomialIndex{0, 0}, Cx{1.0, 0.0});
    return out;
}

int cmd_spectrum(double tau_re, double tau_im, int m, int n, int window,
                 double tolerance, const std::string& out,
                 const std::string& format) {
    DiracParams d{DeformationAngle{0.0}, Cx{tau_re, tau_im}, m, n};
    auto analytic = dirac_spectrum(d, window, SpectrumRoute::analytic);
    auto matrix = dirac_spectrum(d, window, SpectrumRoute::matrix);
    const double cross = spectrum_cross_residual(analytic, matrix);

    if (format == "csv") {
        write_output(spectrum_to_csv(analytic), out);
    } else {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : analytic)
            pts.push_back({{"value", p.value}, {"multiplicity", p.multiplicity}});
        nlohmann::json j{{"points", pts}, {"cross_residual", cross},
                         {"window", window}};
        write_output(j.dump(2), out);
    }
    return cross <= tolerance ? 0 : 1;
}

int cmd_dixmier(double tau_re, double tau_im, int m, int n, double lambda_max,
                double expected, double tolerance, const std::string& out,
                const std::string& format) {
    DiracParams d{DeformationAngle{0.0}, Cx{tau_re, tau_im}, m, n};
    const auto count = static_cast<std::size_t>(lambda_max) + 16;
    auto stream = dirac_inverse_power_stream(d, 2.0, count);
    if (format == "csv") {
        write_output(stream_to_csv(stream), out);
        return 0;
    }
    NcIntEstimate est = ncint_estimate(stream, lambda_max);
    nlohmann::json j = estimate_to_json(est);
    int rc = 0;
    if (expected != 0.0) {
        const double rel = std::abs(est.value - expected) / std::abs(expected);
        j["expected"] = expected;
        j["relative_error"] = rel;
        rc = rel <= tolerance ? 0 : 1;
    }
    write_output(j.dump(2), out);
    return rc;
}

int cmd_verify_circle(std::size_t grid, int fold, double tolerance,
                      const std::string& out) {
    PartitionPair part = build_partition(grid);
    LiftedFamily fam = lift_to_cover(part, fold);
    AxiomReport rep = verify_circ_sum(fam, tolerance);
    write_output(report_to_json(rep).dump(2), out);
    return rep.pass ? 0 : 1;
}

int cmd_verify_torus_cover(double theta, int m, int n, int k, int cutoff,
                           std::size_t grid, double tolerance,
                           const std::string& out) {
    CompletenessReport rep = verify_covering_completeness(
        DeformationAngle{theta}, CoveringParams{m, n, k}, cutoff, grid, tolerance);
    nlohmann::json j{{"report", report_to_json(rep.report)},
                     {"derived_tolerance", rep.derived_tolerance},
                     {"cutoff_warning", rep.cutoff_warning},
                     {"tail_l1_u", rep.tail_l1_u},
                     {"tail_l1_v", rep.tail_l1_v}};
    write_output(j.dump(2), out);
    return rep.report.pass ? 0 : 1;
}

int cmd_verify_triple(double theta, double tau_re, double tau_im, int m, int n,
                      int window, int guard, int pairs, std::uint64_t seed,
                      double tolerance, const std::string& out) {
    DiracParams d{DeformationAngle{theta}, Cx{tau_re, tau_im}, m, n};
    GnsWindow w{window, guard};
    SplitMix64 rng(seed);
    std::vector<AxiomReport> results =
        check_sign_table(d, GnsWindow{window, 0}, tolerance, 8, rng);
    const std::int64_t support = guard / 2 > 0 ? guard / 2 : 1;
    for (int i = 0; i < pairs; ++i) {
        AlgebraElement a = sparse_random(d.theta, support, rng);
        AlgebraElement b = sparse_random(d.theta, support, rng);
        results.push_back(check_first_order(a, b, d, w, tolerance, rng));
        results.push_back(check_real_structure(a, b, d, w, tolerance, rng));
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back(report_to_json(r));
    const bool ok = all_pass(results);
    write_output(nlohmann::json{{"results", arr}, {"pass", ok}}.dump(2), out);
    return ok ? 0 : 1;
}

int cmd_coherent_tower(const std::string& tower_file, double theta, int depth,
                       int m, int n, int k, int cutoff, std::size_t grid,
                       double tolerance, const std::string& out) {
    TowerSpec tower;
    if (!tower_file.empty()) {
        std::ifstream is(tower_file);
        if (!is) throw std::runtime_error("cannot read tower file: " + tower_file);
        nlohmann::json j;
        is >> j;
        tower = tower_from_json(j);
    } else {
        tower.theta0 = theta;
        for (int i = 0; i < depth; ++i) tower.levels.push_back({m, n, k});
    }
    CoherentPrefix prefix = make_partition_prefix(tower, cutoff, grid, 0, 0);
    CoherenceReport coh = coherence_check(prefix, tolerance);
    InnerTrajectory traj = limit_inner_estimate(prefix, prefix);

    double summed_constancy = 0.0;
    for (std::size_t i = 1; i < traj.summed.size(); ++i)
        summed_constancy = std::max(
            summed_constancy, sup_coefficient_distance(traj.summed[0], traj.summed[i]));

    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : coh.links)
        links.push_back({{"upper_level", l.upper_level},
                         {"residual", l.residual},
                         {"pass", l.pass}});
    nlohmann::json j{{"tower", tower_to_json(tower)},
                     {"coherence",
                      {{"links", links},
                       {"max_residual", coh.max_residual},
                       {"pass", coh.pass}}},
                     {"trajectory",
                      {{"averaged_steps", traj.averaged_steps},
                       {"summed_steps", traj.summed_steps},
                       {"summed_constancy", summed_constancy}}}};
    write_output(j.dump(2), out);
    return coh.pass ? 0 : 1;
}

int cmd_report(const std::string& in_file, const std::string& out,
               const std::string& format) {
    std::ifstream is(in_file);
    if (!is) throw std::runtime_error("cannot read report file: " + in_file);
    nlohmann::json j;
    is >> j;
    if (j.value("schema", "") != campaign_schema)
        throw std::runtime_error("unrecognized report schema");
    std::size_t total = 0, passed = 0;
    std::ostringstream lines;
    for (const auto& r : j.at("results")) {
        AxiomReport rep = report_from_json(r);
        ++total;
        if (rep.pass) ++passed;
        lines << (rep.pass ? "[PASS] " : "[FAIL] ") << rep.axiom
              << "  residual=" << rep.residual << "\n";
    }
    const bool ok = total > 0 && passed == total;
    if (format == "json") {
        nlohmann::json summary{{"schema", campaign_schema},
                               {"total", total},
                               {"passed", passed},
                               {"pass", ok}};
        write_output(summary.dump(2), out);
    } else {
        lines << (ok ? "all checks passed" : "some checks failed") << " (" << passed
              << "/" << total << ")\n";
        write_output(lines.str(), out);
    }
    return ok ? 0 : 1;
}

int cmd_run(std::uint64_t seed, const std::string& out) {
    using Task = std::function<std::vector<AxiomReport>()>;
    std::vector<Task> tasks;

    tasks.push_back([] {
        DiracParams d{DeformationAngle{0.0}, Cx{0.0, 1.0}, 1, 1};
        auto a = dirac_spectrum(d, 16, SpectrumRoute::analytic);
        auto b = dirac_spectrum(d, 16, SpectrumRoute::matrix);
        const double cross = spectrum_cross_residual(a, b);
        return std::vector<AxiomReport>{
            make_report("dirac-spectrum-dual-route", cross, 1e-10, 16)};
    });
    tasks.push_back([] {
        PartitionPair part = build_partition(2048);
        std::vector<AxiomReport> rs;
        for (int fold : {2, 3})
            rs.push_back(verify_circ_sum(lift_to_cover(part, fold), 1e-12));
        return rs;
    });
    tasks.push_back([] {
        CompletenessReport r = verify_covering_completeness(
            DeformationAngle{1.0}, CoveringParams{2, 3, 1}, 256, 1024, 1e-8);
        return std::vector<AxiomReport>{r.report};
    });
    tasks.push_back([seed] {
        DiracParams d{DeformationAngle{0.7}, Cx{0.0, 1.0}, 1, 1};
        SplitMix64 rng(seed ^ 0x51677ULL);
        return check_sign_table(d, GnsWindow{12, 0}, 1e-12, 8, rng);
    });
    tasks.push_back([seed] {
        DiracParams d{DeformationAngle{1.0}, Cx{0.5, 1.0}, 1, 1};
        GnsWindow w{24, 8};
        SplitMix64 rng(seed ^ 0xf1257ULL);
        std::vector<AxiomReport> rs;
        for (int i = 0; i < 2; ++i) {
            AlgebraElement a = sparse_random(d.theta, 4, rng);
            AlgebraElement b = sparse_random(d.theta, 4, rng);
            rs.push_back(check_first_order(a, b, d, w, 1e-12, rng));
            rs.push_back(check_real_structure(a, b, d, w, 1e-12, rng));
        }
        return rs;
    });
    tasks.push_back([] {
        TowerSpec tower{0.0, {{2, 1, 0}, {1, 2, 0}, {2, 1, 0}}};
        CoherentPrefix prefix = make_partition_prefix(tower, 96, 512, 0, 0);
        CoherenceReport coh = coherence_check(prefix, 1e-10);
        InnerTrajectory traj = limit_inner_estimate(prefix, prefix);
        double constancy = 0.0;
        for (std::size_t i = 1; i < traj.summed.size(); ++i)
            constancy = std::max(constancy, sup_coefficient_distance(traj.summed[0],
                                                                     traj.summed[i]));
        return std::vector<AxiomReport>{
            make_report("tower-coherence", coh.max_residual, 1e-10),
            make_report("tower-summed-constancy", constancy, 1e-10)};
    });
    tasks.push_back([] {
        std::vector<double> harmonic(100016);
        for (std::size_t i = 0; i < harmonic.size(); ++i)
            harmonic[i] = 1.0 / static_cast<double>(i + 1);
        NcIntEstimate est = ncint_estimate(harmonic, 1e5);
        return std::vector<AxiomReport>{
            make_report("dixmier-harmonic-unit", std::abs(est.value - 1.0), 0.02)};
    });
    tasks.push_back([] {
        ScalingReport r = verify_covering_scaling(DeformationAngle{1.0}, Cx{0.0, 1.0},
                                                  CoveringParams{2, 1, 0}, 200000, 0.05);
        return std::vector<AxiomReport>{r.report};
    });

    std::vector<std::vector<AxiomReport>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mutex;
    const unsigned workers = worker_count();
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    results[i] = tasks[i]();
                } catch (const std::exception& e) {
                    failed = true;
                    std::lock_guard<std::mutex> lk(err_mutex);
                    if (first_error.empty()) first_error = e.what();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failed) throw std::runtime_error("campaign task failed: " + first_error);

    std::vector<AxiomReport> flat;
    for (const auto& rs : results) flat.insert(flat.end(), rs.begin(), rs.end());

    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : flat) arr.push_back(report_to_json(r));
    const bool ok = all_pass(flat);
    nlohmann::json j{{"schema", campaign_schema},
                     {"created_utc", utc_now()},
                     {"seed", seed},
                     {"workers", workers},
                     {"results", arr},
                     {"pass", ok}};
    write_output(j.dump(2), out);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for twisted-torus covering machinery"};
    app.require_subcommand(1);

    int rc = 0;
    std::string out, format = "json";

    double theta = 0.0, tau_re = 0.0, tau_im = 1.0;
    int m = 1, n = 1, k = 0;
    int window = 16, guard = 0;
    std::size_t grid = 1024;
    int cutoff = 256, fold = 2, depth = 3, pairs = 5;
    double lambda_max = 1e5, tolerance = 0.0, expected = 0.0;
    std::uint64_t seed = 1;
    std::string tower_file, report_in;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", out, "output file (default: stdout)");
        c->add_option("--format", format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* sp = app.add_subcommand("spectrum", "Dirac spectrum, dual-route checked");
    sp->add_option("--tau-re", tau_re);
    sp->add_option("--tau-im", tau_im);
    sp->add_option("--m", m);
    sp->add_option("--n", n);
    sp->add_option("--window", window);
    sp->add_option("--tolerance", tolerance);
    add_common(sp);
    sp->callback([&] {
        rc = cmd_spectrum(tau_re, tau_im, m, n, window,
                          tolerance > 0.0 ? tolerance : 1e-10, out, format);
    });

    auto* dx = app.add_subcommand("dixmier", "trace-functional estimate for |D|^-2");
    dx->add_option("--tau-re", tau_re);
    dx->add_option("--tau-im", tau_im);
    dx->add_option("--m", m);
    dx->add_option("--n", n);
    dx->add_option("--lambda-max", lambda_max);
    dx->add_option("--expected", expected);
    dx->add_option("--tolerance", tolerance);
    add_common(dx);
    dx->callback([&] {
        rc = cmd_dixmier(tau_re, tau_im, m, n, lambda_max, expected,
                         tolerance > 0.0 ? tolerance : 0.05, out, format);
    });

    auto* vc = app.add_subcommand("verify-circle", "circle partition completeness");
    vc->add_option("--grid", grid);
    vc->add_option("--fold", fold);
    vc->add_option("--tolerance", tolerance);
    add_common(vc);
    vc->callback([&] {
        rc = cmd_verify_circle(grid == 1024 ? 4096 : grid, fold,
                               tolerance > 0.0 ? tolerance : 1e-12, out);
    });

    auto* vt = app.add_subcommand("verify-torus-cover", "covering completeness");
    vt->add_option("--theta", theta);
    vt->add_option("--m", m);
    vt->add_option("--n", n);
    vt->add_option("--k", k);
    vt->add_option("--cutoff", cutoff);
    vt->add_option("--grid", grid);
    vt->add_option("--tolerance", tolerance);
    add_common(vt);
    vt->callback([&] {
        rc = cmd_verify_torus_cover(theta, m, n, k, cutoff, grid,
                                    tolerance > 0.0 ? tolerance : 1e-8, out);
    });

    auto* va = app.add_subcommand("verify-triple-axioms",
                                  "first order, real structure, sign table");
    va->add_option("--theta", theta);
    va->add_option("--tau-re", tau_re);
    va->add_option("--tau-im", tau_im);
    va->add_option("--m", m);
    va->add_option("--n", n);
    va->add_option("--window", window);
    va->add_option("--guard", guard);
    va->add_option("--pairs", pairs);
    va->add_option("--seed", seed);
    va->add_option("--tolerance", tolerance);
    add_common(va);
    va->callback([&] {
        rc = cmd_verify_triple(theta, tau_re, tau_im, m, n, window,
                               guard > 0 ? guard : 8, pairs, seed,
                               tolerance > 0.0 ? tolerance : 1e-12, out);
    });

    auto* ct = app.add_subcommand("coherent-tower", "descent coherence and trajectories");
    ct->add_option("--tower", tower_file, "tower spec JSON file");
    ct->add_option("--theta", theta);
    ct->add_option("--depth", depth);
    ct->add_option("--m", m);
    ct->add_option("--n", n);
    ct->add_option("--k", k);
    ct->add_option("--cutoff", cutoff);
    ct->add_option("--grid", grid);
    ct->add_option("--tolerance", tolerance);
    add_common(ct);
    ct->callback([&] {
        rc = cmd_coherent_tower(tower_file, theta, depth, m, n, k,
                                cutoff == 256 ? 48 : cutoff,
                                grid == 1024 ? 512 : grid,
                                tolerance > 0.0 ? tolerance : 1e-10, out);
    });

    auto* rp = app.add_subcommand("report", "summarize and gate a saved campaign");
    rp->add_option("input", report_in, "campaign JSON file")->required();
    add_common(rp);
    rp->callback([&] { rc = cmd_report(report_in, out, format); });

    auto* rn = app.add_subcommand("run", "full verification campaign");
    rn->add_option("--seed", seed);
    rn->add_option("--out", out, "output file (default: stdout)");
    rn->callback([&] { rc = cmd_run(seed, out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
