#include <doctest.h>

#include <cmath>

#include "grothcover/cover.hpp"
#include "grothcover/instances.hpp"
#include "grothcover/relax.hpp"

using namespace grothcover;

namespace {

CspInstance triangle_maxcut() {
    std::vector<RawItem> raw(3);
    raw[0] = {1, 2, false, false, "xor", 1.0};
    raw[1] = {2, 3, false, false, "xor", 1.0};
    raw[2] = {1, 3, false, false, "xor", 1.0};
    return encode_problem(ProblemKind::MAXCUT, raw, 3);
}

}  // namespace

TEST_CASE("sample budgets match the closed forms") {
    BudgetParams p;
    p.n = 10;
    p.d = 20;
    p.gamma = 0.1;
    p.eps = 0.1;
    p.alpha = 0.878;
    p.kappa = 0.25;
    const SampleBudget poly = sample_budget(BudgetRegime::POLYHEDRAL, p);
    CHECK(poly.t == 48277);

    const SampleBudget bern = sample_budget(BudgetRegime::PSD_BERNSTEIN, p);
    const double ag = p.alpha * p.gamma;
    const double ne = 10.0 / 0.1;
    const long long want_b = static_cast<long long>(
        std::ceil(8.0 * ne * ne * std::log(20.0) / (ag * ag) - 1e-12));
    CHECK(bern.t == want_b);
    CHECK(bern.t > 31000000);
    CHECK(bern.t < 31200000);

    const SampleBudget nest = sample_budget(BudgetRegime::PSD_NESTEROV, p);
    const long long want_n = static_cast<long long>(
        std::ceil(2.0 * M_PI * std::log(20.0) * 1e4 - 1e-12));
    CHECK(nest.t == want_n);

    BudgetParams bad;
    CHECK_THROWS_AS(sample_budget(BudgetRegime::POLYHEDRAL, bad),
                    std::invalid_argument);
}

TEST_CASE("adaptive cover is feasible and within the cost budget") {
    const CspInstance k3 = triangle_maxcut();
    const ConeSpec spec = build_cone_spec(k3);
    SolverConfig cfg;
    cfg.eps = 1e-2;
    const RelaxSolution sol = solve_nu_polar_eps(spec, Vec::Ones(3), cfg);

    RoundingSpec r;
    BuildCoverOptions opts;
    opts.mode = CoverMode::ADAPTIVE;
    opts.beta_target = 0.8;
    opts.seed = 17;
    const Cover cover = build_cover(spec, r, sol.dual, opts);
    CHECK(cover.meta.mode == "adaptive");
    CHECK(cover.total_weight() <= sol.dual.mu / 0.8 + 1e-9);
    // The cover dominates the witness target in the polyhedral order, hence
    // also the original unit demand.
    const Vec target = apply_adjoint(spec, sol.dual.y);
    CHECK(check_cover_feasible(spec, cover, target, 1e-8).feasible);
    CHECK(check_cover_feasible(spec, cover, Vec(Vec::Ones(3)), 1e-8).feasible);
}

TEST_CASE("cover sampling is deterministic across thread counts") {
    const CspInstance k3 = triangle_maxcut();
    const ConeSpec spec = build_cone_spec(k3);
    SolverConfig cfg;
    cfg.eps = 1e-2;
    const RelaxSolution sol = solve_nu_polar_eps(spec, Vec::Ones(3), cfg);

    RoundingSpec r;
    BuildCoverOptions opts;
    opts.mode = CoverMode::ADAPTIVE;
    opts.beta_target = 0.8;
    opts.seed = 23;
    opts.threads = 1;
    const Cover a = build_cover(spec, r, sol.dual, opts);
    opts.threads = 4;
    const Cover b = build_cover(spec, r, sol.dual, opts);
    REQUIRE(a.entries.size() == b.entries.size());
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    for (; ia != a.entries.end(); ++ia, ++ib) {
        CHECK(ia->first == ib->first);
        CHECK(ia->second == ib->second);  // exact: integer count aggregation
    }
}

TEST_CASE("theoretical cover uses the prescribed weights") {
    const CspInstance k3 = triangle_maxcut();
    const ConeSpec spec = build_cone_spec(k3);
    SolverConfig cfg;
    cfg.eps = 0.1;
    const RelaxSolution sol = solve_nu_polar_eps(spec, Vec::Ones(3), cfg);

    RoundingSpec r;
    r.claimed_alpha = 0.85;
    BuildCoverOptions opts;
    opts.mode = CoverMode::THEORETICAL;
    opts.budget.t = 8192;
    opts.budget.gamma = 0.1;
    opts.seed = 3;
    const Cover cover = build_cover(spec, r, sol.dual, opts);
    CHECK(cover.meta.mode == "theoretical");
    CHECK(cover.meta.t_used == 8192);
    // Total weight = mu·T/((1−γ)·α·T) = mu/((1−γ)α).
    CHECK(cover.total_weight() ==
          doctest::Approx(sol.dual.mu / (0.9 * 0.85)).epsilon(1e-9));

    RoundingSpec no_alpha;
    CHECK_THROWS_AS(build_cover(spec, no_alpha, sol.dual, opts),
                    std::invalid_argument);
}

TEST_CASE("adaptive cover exhausts tiny sample caps") {
    const CspInstance k3 = triangle_maxcut();
    const ConeSpec spec = build_cone_spec(k3);
    SolverConfig cfg;
    cfg.eps = 1e-2;
    const RelaxSolution sol = solve_nu_polar_eps(spec, Vec::Ones(3), cfg);

    RoundingSpec r;
    BuildCoverOptions opts;
    opts.mode = CoverMode::ADAPTIVE;
    opts.beta_target = 0.8;
    opts.seed = 17;
    opts.mu_cert = 0.1 * sol.dual.mu;  // unreachable cost target
    opts.t_cap = 4096;
    CHECK_THROWS_AS(build_cover(spec, r, sol.dual, opts), std::runtime_error);
}

TEST_CASE("cover feasibility reports") {
    const CspInstance k3 = triangle_maxcut();
    const ConeSpec spec = build_cone_spec(k3);
    Cover cover;
    cover.entries[CutSet(0b0011, 3)] = 1.0;  // {0,1}: satisfies edges 12, 13
    Vec z(3);
    z << 1.0, 0.0, 1.0;
    CHECK(check_cover_feasible(spec, cover, z).feasible);
    z << 1.0, 1.0, 1.0;
    const FeasReport rep = check_cover_feasible(spec, cover, z);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.worst_residual == doctest::Approx(-1.0));

    // Matrix order check.
    const Mat s = cover.sum_tensor(4);
    CHECK(check_cover_feasible(spec, cover, SymMatrix(Mat(0.5 * s))).feasible);
    CHECK_FALSE(
        check_cover_feasible(spec, cover, SymMatrix(Mat(s + Mat::Identity(4, 4))))
            .feasible);
}
