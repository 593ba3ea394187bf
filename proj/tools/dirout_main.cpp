#include <cstdint>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "dirout/csv.hpp"
#include "dirout/errors.hpp"
#include "dirout/functional.hpp"
#include "dirout/harness.hpp"
#include "dirout/robust.hpp"
#include "dirout/simulate.hpp"

namespace {

using namespace dirout;

// Pulls 64 bits of entropy when no --seed was given; the chosen value is
// echoed on stderr so the run can be repeated.
std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t given) {
    if (opt->count() > 0) return given;
    std::random_device device;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(device()) << 32) ^ static_cast<std::uint64_t>(device());
    std::cerr << "seed: " << seed << '\n';
    return seed;
}

struct CommonOptions {
    std::uint64_t seed = 0;
    double alpha = 0.993;
    double h_frac = 0.75;
    int directions = 200;
    int mcd_starts = 500;
    std::string hr_method = "simulated";
    std::string contamination = "fixed";
};

CutoffMethod parse_method(const std::string& name) {
    return name == "asymptotic" ? CutoffMethod::asymptotic : CutoffMethod::simulated;
}

ContaminationScheme parse_scheme(const std::string& name) {
    return name == "bernoulli" ? ContaminationScheme::bernoulli
                               : ContaminationScheme::fixed_count;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional outlyingness for functional data"};
    app.require_subcommand(1);

    CommonOptions common;
    int model = 1;
    int n = -1;
    int k = -1;
    double eps = 0.0;
    int runs = 200;
    std::string in_path, out_path, labels_path;

    auto* simulate = app.add_subcommand("simulate", "Generate curves from a benchmark model");
    simulate->add_option("--model", model, "Model id (0-10)")
        ->required()
        ->check(CLI::Range(0, 10));
    simulate->add_option("--n", n, "Number of curves");
    simulate->add_option("--k", k, "Grid size");
    simulate->add_option("--eps", eps, "Contamination level in [0, 0.5)");
    auto* sim_seed = simulate->add_option("--seed", common.seed, "RNG seed");
    simulate->add_option("--out", out_path, "Curves CSV path")->required();
    simulate->add_option("--labels", labels_path, "Labels CSV path");
    simulate->add_option("--contamination", common.contamination, "fixed or bernoulli")
        ->check(CLI::IsMember({"fixed", "bernoulli"}));
    simulate->callback([&] {
        ModelSpec spec = ModelSpec::defaults(model);
        if (n >= 0) spec.n = n;
        if (k >= 0) spec.k = k;
        spec.eps = eps;
        spec.seed = resolve_seed(sim_seed, common.seed);
        spec.scheme = parse_scheme(common.contamination);
        auto [data, labels] = generate_model(spec);
        write_curves_csv(out_path, data);
        if (!labels_path.empty()) write_labels_csv(labels_path, labels);
    });

    auto* outly = app.add_subcommand("outlyingness", "Per-curve outlyingness summaries");
    outly->add_option("--in", in_path, "Input curves CSV")->required();
    outly->add_option("--out", out_path, "Summary CSV path")->required();
    outly->add_option("--directions", common.directions, "Projection directions (p >= 2)")
        ->check(CLI::PositiveNumber);
    auto* out_seed = outly->add_option("--seed", common.seed, "RNG seed");
    outly->callback([&] {
        const CsvDataset input = read_curves_csv(in_path);
        DepthConfig cfg;
        cfg.n_directions = common.directions;
        cfg.seed = resolve_seed(out_seed, common.seed);
        const auto summaries = summarize(outlyingness_field(input.data, cfg));
        write_summaries_csv(out_path, summaries, &input.curve_ids);
    });

    auto* detect_cmd = app.add_subcommand("detect", "Flag outlying curves");
    detect_cmd->add_option("--in", in_path, "Input curves CSV")->required();
    detect_cmd->add_option("--out", out_path, "Detection CSV path")->required();
    detect_cmd->add_option("--alpha", common.alpha, "Cutoff level")
        ->check(CLI::Range(0.0, 1.0));
    detect_cmd->add_option("--h-frac", common.h_frac, "MCD subset fraction");
    detect_cmd->add_option("--directions", common.directions, "Projection directions")
        ->check(CLI::PositiveNumber);
    detect_cmd->add_option("--mcd-starts", common.mcd_starts, "Elemental starts")
        ->check(CLI::PositiveNumber);
    detect_cmd->add_option("--hr-method", common.hr_method, "simulated or asymptotic")
        ->check(CLI::IsMember({"simulated", "asymptotic"}));
    auto* det_seed = detect_cmd->add_option("--seed", common.seed, "RNG seed");
    detect_cmd->callback([&] {
        const CsvDataset input = read_curves_csv(in_path);
        const std::uint64_t seed = resolve_seed(det_seed, common.seed);
        DepthConfig depth;
        depth.n_directions = common.directions;
        depth.seed = seed;
        const auto summaries = summarize(outlyingness_field(input.data, depth));
        DetectionConfig cfg;
        cfg.alpha = common.alpha;
        cfg.h_frac = common.h_frac;
        cfg.seed = seed;
        cfg.method = parse_method(common.hr_method);
        cfg.mcd_starts = common.mcd_starts;
        const DetectionReport report = detect(summaries, cfg);
        write_detection_csv(out_path, report, &input.curve_ids);
    });

    auto* bench = app.add_subcommand("benchmark", "Monte-Carlo detection rates for a model");
    bench->add_option("--model", model, "Model id (0-10)")
        ->required()
        ->check(CLI::Range(0, 10));
    bench->add_option("--n", n, "Number of curves");
    bench->add_option("--k", k, "Grid size");
    bench->add_option("--eps", eps, "Contamination level in [0, 0.5)");
    bench->add_option("--runs", runs, "Replications")->check(CLI::PositiveNumber);
    bench->add_option("--alpha", common.alpha, "Cutoff level")->check(CLI::Range(0.0, 1.0));
    bench->add_option("--h-frac", common.h_frac, "MCD subset fraction");
    bench->add_option("--directions", common.directions, "Projection directions")
        ->check(CLI::PositiveNumber);
    bench->add_option("--mcd-starts", common.mcd_starts, "Elemental starts")
        ->check(CLI::PositiveNumber);
    bench->add_option("--hr-method", common.hr_method, "simulated or asymptotic")
        ->check(CLI::IsMember({"simulated", "asymptotic"}));
    bench->add_option("--contamination", common.contamination, "fixed or bernoulli")
        ->check(CLI::IsMember({"fixed", "bernoulli"}));
    auto* bench_seed = bench->add_option("--seed", common.seed, "RNG seed");
    bench->callback([&] {
        ModelSpec spec = ModelSpec::defaults(model);
        if (n >= 0) spec.n = n;
        if (k >= 0) spec.k = k;
        spec.eps = eps;
        spec.seed = resolve_seed(bench_seed, common.seed);
        spec.scheme = parse_scheme(common.contamination);

        DetectionConfig det;
        det.alpha = common.alpha;
        det.h_frac = common.h_frac;
        det.seed = spec.seed;
        det.method = parse_method(common.hr_method);
        det.mcd_starts = common.mcd_starts;

        DepthConfig depth;
        depth.n_directions = common.directions;

        const MonteCarloResult result = monte_carlo(spec, runs, det, depth);
        std::cout << "model,eps,runs,pc_mean,pc_sd,pf_mean,pf_sd,failures\n";
        std::cout << model << ',' << format_double(eps) << ',' << result.runs << ','
                  << (result.pc_mean ? format_double(*result.pc_mean) : "") << ','
                  << (result.pc_sd ? format_double(*result.pc_sd) : "") << ','
                  << format_double(result.pf_mean) << ',' << format_double(result.pf_sd) << ','
                  << result.failures << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const SingularScatter& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const InfiniteOutlyingness& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const InvalidDf& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
