#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "grothcover/certify.hpp"
#include "grothcover/instances.hpp"
#include "grothcover/oracle.hpp"
#include "grothcover/relax.hpp"
#include "grothcover/rounding.hpp"

namespace {

using namespace grothcover;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;

struct RunConfig {
    std::string input;
    std::string kind = "maxcut";
    double beta = 0.8;
    std::uint64_t seed = 0;
    std::string mode = "adaptive";
    long long samples_cap = 1000000;
    long long alpha_samples = 10000;
    double eps = -1.0;
    double sigma = -1.0;
    double gamma = -1.0;
    std::string format = "json";
    bool oracle = false;
    std::string output;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open input file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CspInstance load_instance(const std::string& path, const std::string& kind) {
    const std::string text = read_file(path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        return parse_instance_json(text);
    }
    return parse_instance_text(text, problem_kind_from_string(kind));
}

int env_threads() {
    const char* v = std::getenv("GROTHCOVER_THREADS");
    if (v == nullptr) {
        return 1;
    }
    const long t = std::strtol(v, nullptr, 10);
    if (t < 1) {
        throw std::invalid_argument("GROTHCOVER_THREADS must be >= 1");
    }
    return static_cast<int>(t);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

std::string text_summary(const PipelineResult& res) {
    const CertReport& c = res.cert.checks;
    std::ostringstream os;
    os << "beta=" << fmt(res.cert.beta) << " rho=" << fmt(res.cert.rho)
       << " mu=" << fmt(res.cert.mu) << " alpha_used="
       << fmt(res.cert.alpha_used) << " U=" << res.cert.u.to_string()
       << " support=" << res.cert.y.support() << "\n";
    os << "clause i   (rho*mu = <W,Z>): " << (c.c1 ? "pass" : "FAIL")
       << " gap=" << fmt(c.c1_gap) << "\n";
    os << "clause ii  (cut >= beta*rho): " << (c.c2 ? "pass" : "FAIL")
       << " margin=" << fmt(c.c2_cut) << "\n";
    os << "clause iii (cover >= Z, cost <= mu/beta): "
       << (c.c3 ? "pass" : "FAIL") << " residual=" << fmt(c.c3_cover_residual)
       << " cost_margin=" << fmt(c.c3_cost) << "\n";
    os << "clause iv  (x dominates W in Dist*): " << (c.c4 ? "pass" : "FAIL")
       << " trace_margin=" << fmt(c.c4_trace)
       << " dist_star=" << fmt(c.c4_dist_star) << "\n";
    os << "certificate: " << (c.pass ? "pass" : "FAIL") << "\n";
    return os.str();
}

std::string oracle_block(const CspInstance& inst, const ConeSpec& spec,
                         const PipelineResult& res) {
    std::ostringstream os;
    os << "{\"oracle\":{";
    bool first = true;
    if (spec.dim() <= 24) {
        const OracleResult mq = brute_maxq(spec, res.w_matrix);
        os << "\"maxq\":" << fmt(mq.value);
        os << ",\"beta_rho_le_maxq\":"
           << (res.cert.beta * res.cert.rho <= mq.value + 1e-9 ? "true"
                                                               : "false");
        os << ",\"maxq_le_rho\":"
           << (mq.value <= res.cert.rho + 1e-9 ? "true" : "false");
        first = false;
    }
    if (inst.n <= 14) {
        const Vec z_dem = apply_adjoint(spec, res.z_matrix);
        const OracleResult fc = exact_fevc(inst, z_dem);
        if (!first) {
            os << ",";
        }
        os << "\"fevc\":" << fmt(fc.value);
        os << ",\"mu_le_fevc\":"
           << (res.cert.mu <= fc.value + 1e-9 ? "true" : "false");
        os << ",\"fevc_le_mu_over_beta\":"
           << (fc.value <= res.cert.mu / res.cert.beta + 1e-9 ? "true"
                                                              : "false");
    }
    os << "}}";
    return os.str();
}

void emit(const RunConfig& cfg, const std::string& body) {
    if (cfg.output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot open output file: " + cfg.output);
    }
    out << body;
}

int run_direction(const RunConfig& cfg, PipelineDirection dir) {
    const CspInstance inst = load_instance(cfg.input, cfg.kind);
    const ConeSpec spec = build_cone_spec(inst);

    PipelineOptions opts;
    opts.beta = cfg.beta;
    opts.seed = cfg.seed;
    opts.t_cap = cfg.samples_cap;
    opts.alpha_samples = cfg.alpha_samples;
    opts.threads = env_threads();
    if (cfg.mode == "theoretical") {
        opts.mode = CoverMode::THEORETICAL;
    } else if (cfg.mode == "adaptive") {
        opts.mode = CoverMode::ADAPTIVE;
    } else {
        throw std::invalid_argument("unknown --mode: " + cfg.mode);
    }
    if (cfg.eps > 0.0 || cfg.sigma > 0.0 || cfg.gamma > 0.0) {
        std::cerr << "warning: explicit eps/sigma/gamma overrides bypass the "
                     "parameter schedule; the certificate guarantee may not "
                     "hold\n";
    }
    opts.eps_override = cfg.eps;
    opts.sigma_override = cfg.sigma;
    opts.gamma_override = cfg.gamma;

    const PipelineResult res = run_pipeline(spec, inst.weight_vector(), dir, opts);

    std::string body;
    if (cfg.format == "json") {
        body = certificate_to_json(res.cert);
        body += "\n";
    } else if (cfg.format == "text") {
        body = text_summary(res);
    } else {
        throw std::invalid_argument("unknown --format: " + cfg.format);
    }
    if (cfg.oracle) {
        body += oracle_block(inst, spec, res);
        body += "\n";
    }
    emit(cfg, body);
    return res.cert.checks.pass ? kExitPass : kExitVerifyFail;
}

int run_estimate_alpha(const RunConfig& cfg) {
    const CspInstance inst = load_instance(cfg.input, cfg.kind);
    const ConeSpec spec = build_cone_spec(inst);
    SolverConfig scfg;
    scfg.eps = 1e-3;
    scfg.sigma_budget = 0.2;
    const RelaxSolution sol =
        solve_nu_polar_eps(spec, inst.weight_vector(), scfg);
    const SymMatrix y_bar =
        SymMatrix(sol.dual.y.mat() / sol.dual.mu, 1e-9);
    RngStream rng = RngStream::derive(cfg.seed, 0x616c706861ULL);
    RoundingSpec rspec;
    AlphaEstimate est = estimate_rounding_constant(spec, rspec, y_bar,
                                                   cfg.alpha_samples, rng);
    std::ostringstream os;
    os << "{\"alpha_hat\":" << fmt(est.alpha_hat)
       << ",\"confidence_halfwidth\":" << fmt(est.confidence_halfwidth)
       << ",\"samples\":" << est.samples << "}\n";
    emit(cfg, os.str());
    return kExitPass;
}

int run_oracle(const RunConfig& cfg) {
    const CspInstance inst = load_instance(cfg.input, cfg.kind);
    const ConeSpec spec = build_cone_spec(inst);
    std::ostringstream os;
    os << "{";
    bool first = true;
    if (spec.dim() <= 24) {
        const SymMatrix w = apply_map(spec, inst.weight_vector());
        const OracleResult mq = brute_maxq(spec, w);
        os << "\"maxq\":" << fmt(mq.value) << ",\"arg_cut\":\""
           << mq.arg_cut->to_string() << "\"";
        first = false;
    }
    if (inst.n <= 14) {
        const OracleResult fc = exact_fevc(inst);
        if (!first) {
            os << ",";
        }
        os << "\"fevc\":" << fmt(fc.value);
    }
    os << "}\n";
    emit(cfg, os.str());
    return kExitPass;
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg, bool pipeline) {
    cmd->add_option("--input", cfg.input, "Instance file (.json or edge list)")
        ->required();
    cmd->add_option("--kind", cfg.kind,
                    "Problem kind for edge-list inputs "
                    "(maxcut|maxdicut|max2sat|csp)");
    cmd->add_option("--seed", cfg.seed, "64-bit random seed");
    cmd->add_option("--output", cfg.output, "Write output to file");
    if (pipeline) {
        cmd->add_option("--beta", cfg.beta, "Certificate quality beta in (0,1)");
        cmd->add_option("--mode", cfg.mode,
                        "Cover sampling mode: theoretical|adaptive");
        cmd->add_option("--samples-cap", cfg.samples_cap,
                        "Adaptive-mode sample cap");
        cmd->add_option("--eps", cfg.eps, "Override perturbation eps");
        cmd->add_option("--sigma", cfg.sigma, "Override duality-gap budget");
        cmd->add_option("--gamma", cfg.gamma, "Override concentration gamma");
        cmd->add_option("--format", cfg.format, "Output format: json|text");
        cmd->add_flag("--oracle", cfg.oracle,
                      "Append brute-force oracle cross-check (small n)");
    } else {
        cmd->add_option("--samples", cfg.alpha_samples,
                        "Monte-Carlo sample count");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "grothcover: pairs 2-CSP maximization with fractional covering and "
        "emits beta-certificates"};
    app.require_subcommand(1);

    RunConfig cfg;
    CLI::App* cover = app.add_subcommand(
        "cover", "Covering direction: demand z -> weights w + certificate");
    add_common_flags(cover, cfg, true);
    CLI::App* solve = app.add_subcommand(
        "solve", "Maximization direction: weights w -> demand z + certificate");
    add_common_flags(solve, cfg, true);
    CLI::App* est = app.add_subcommand("estimate-alpha",
                                       "Estimate the empirical rounding "
                                       "constant for an instance");
    add_common_flags(est, cfg, false);
    CLI::App* orc = app.add_subcommand(
        "oracle", "Brute-force maxq/fevc values for a small instance");
    add_common_flags(orc, cfg, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitInputError;
    }

    try {
        if (cover->parsed()) {
            return run_direction(cfg, PipelineDirection::COVER);
        }
        if (solve->parsed()) {
            return run_direction(cfg, PipelineDirection::MAX);
        }
        if (est->parsed()) {
            return run_estimate_alpha(cfg);
        }
        return run_oracle(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        if (msg.find("not below the estimated rounding constant") !=
            std::string::npos) {
            return kExitInputError;
        }
        if (msg.find("sampling cap") != std::string::npos ||
            msg.find("budget") != std::string::npos) {
            return kExitBudget;
        }
        return kExitBudget;
    }
}
