#include <doctest.h>

#include <fstream>
#include <sstream>

#include "grothcover/instances.hpp"
#include "grothcover/oracle.hpp"

using namespace grothcover;

namespace {

std::string data_file(const char* name) {
    return std::string(GROTHCOVER_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("predicate templates from op") {
    const PredicateTemplate andp = PredicateTemplate::from_op("and", false, false);
    CHECK(andp.eval(true, true));
    CHECK_FALSE(andp.eval(true, false));
    CHECK_FALSE(andp.eval(false, true));
    CHECK_FALSE(andp.eval(false, false));

    const PredicateTemplate dicut = PredicateTemplate::from_op("and", false, true);
    CHECK(dicut.eval(true, false));
    CHECK_FALSE(dicut.eval(true, true));

    const PredicateTemplate xorp = PredicateTemplate::from_op("xor", false, false);
    CHECK(xorp.eval(true, false));
    CHECK(xorp.eval(false, true));
    CHECK_FALSE(xorp.eval(true, true));

    const PredicateTemplate imp = PredicateTemplate::from_op("implies", false, false);
    CHECK(imp.eval(false, false));
    CHECK(imp.eval(false, true));
    CHECK(imp.eval(true, true));
    CHECK_FALSE(imp.eval(true, false));

    const PredicateTemplate lit = PredicateTemplate::from_op("lit", true, false);
    CHECK(lit.eval(false, true));
    CHECK(lit.eval(false, false));
    CHECK_FALSE(lit.eval(true, true));

    CHECK_THROWS_AS(PredicateTemplate::from_op("nand", false, false),
                    std::invalid_argument);
}

TEST_CASE("delta encoding is the exact satisfaction indicator") {
    // All 16 truth tables, all variable pairs (including i = j), n = 3,
    // all assignments: <A_c, S_U> = satisfied(c, a) exactly.
    const int n = 3;
    for (int table = 0; table < 16; ++table) {
        PredicateTemplate t;
        for (int cell = 0; cell < 4; ++cell) {
            t.truth_table[static_cast<std::size_t>(cell)] =
                ((table >> cell) & 1) != 0;
        }
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                Constraint c{t, i, j};
                const SparseSym a = constraint_matrix(c, n);
                for (int bits = 0; bits < (1 << n); ++bits) {
                    std::vector<bool> assign(n);
                    for (int v = 0; v < n; ++v) {
                        assign[static_cast<std::size_t>(v)] =
                            ((bits >> v) & 1) != 0;
                    }
                    const CutSet u = CutSet::from_assignment(assign);
                    const double got = a.inner_cut(u);
                    const double want = satisfied(c, assign) ? 1.0 : 0.0;
                    CHECK(got == doctest::Approx(want).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("encode_problem kinds") {
    std::vector<RawItem> raw(1);
    raw[0].i = 1;
    raw[0].j = 2;
    raw[0].weight = 2.5;

    const CspInstance cut = encode_problem(ProblemKind::MAXCUT, raw, 2);
    CHECK(cut.d() == 1);
    CHECK(cut.constraints[0].tmpl.eval(true, false));
    CHECK_FALSE(cut.constraints[0].tmpl.eval(true, true));
    CHECK(cut.weights[0] == 2.5);

    const CspInstance dicut = encode_problem(ProblemKind::MAXDICUT, raw, 2);
    CHECK(dicut.constraints[0].tmpl.eval(true, false));
    CHECK_FALSE(dicut.constraints[0].tmpl.eval(false, true));
    CHECK_FALSE(dicut.constraints[0].tmpl.eval(true, true));

    RawItem sat = raw[0];
    sat.neg_i = true;
    const CspInstance two = encode_problem(ProblemKind::MAX2SAT, {sat}, 2);
    CHECK(two.constraints[0].tmpl.eval(false, false));  // ¬x1 true
    CHECK(two.constraints[0].tmpl.eval(true, true));    // x2 true
    CHECK_FALSE(two.constraints[0].tmpl.eval(true, false));
}

TEST_CASE("instance validation") {
    CspInstance inst;
    inst.n = 2;
    Constraint c;
    c.tmpl = PredicateTemplate::from_op("and", false, false);
    c.i = 1;
    c.j = 2;
    inst.constraints = {c};
    inst.weights = {1.0};
    CHECK_NOTHROW(inst.validate());

    CspInstance neg = inst;
    neg.weights = {-1.0};
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);

    CspInstance oob = inst;
    oob.constraints[0].j = 3;
    CHECK_THROWS_AS(oob.validate(), std::invalid_argument);

    CspInstance falsy = inst;
    falsy.constraints[0].tmpl = PredicateTemplate{};
    CHECK_THROWS_AS(falsy.validate(), std::invalid_argument);

    CspInstance empty;
    empty.n = 2;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}

TEST_CASE("json and text parsing") {
    const CspInstance k3 = parse_instance_json(slurp(data_file("k3.json")));
    CHECK(k3.n == 3);
    CHECK(k3.d() == 3);
    CHECK(all_xor(k3));

    const CspInstance k3t =
        parse_instance_text(slurp(data_file("k3.txt")), ProblemKind::MAXCUT);
    CHECK(k3t.n == 3);
    CHECK(k3t.d() == 3);

    CHECK_THROWS(parse_instance_json("{\"kind\":\"maxcut\""));
    CHECK_THROWS(parse_instance_text("1 2 -1\n", ProblemKind::MAXCUT));
    CHECK_THROWS(parse_instance_text("1 oops 1\n", ProblemKind::MAXCUT));
}

TEST_CASE("cut set canonicalization and ordering") {
    // Complement of {1} over {0,1,2} is {0,2}.
    const CutSet u(0b010, 2);
    CHECK(u.contains(0));
    CHECK(u.contains(2));
    CHECK_FALSE(u.contains(1));

    const CutSet a(0b0011, 3);  // {0,1}
    const CutSet b(0b0101, 3);  // {0,2}
    CHECK(a < b);
    CHECK_FALSE(b < a);

    std::vector<bool> assign = {true, false, true};
    const CutSet f = CutSet::from_assignment(assign);
    CHECK(f.contains(0));
    CHECK(f.contains(1));
    CHECK_FALSE(f.contains(2));
    CHECK(f.contains(3));
    CHECK(f.assignment() == assign);
}

TEST_CASE("cone spec from instance") {
    const CspInstance k3 = parse_instance_json(slurp(data_file("k3.json")));
    const ConeSpec spec = build_cone_spec(k3);
    CHECK(spec.dim() == 4);
    CHECK(spec.d() == 3);
    CHECK(spec.kappa() == doctest::Approx(0.25));
    CHECK(spec.dist_kind() == DistKind::PSD_TRIANGLE);
    for (const auto& a : spec.a_matrices()) {
        CHECK(a.trace() >= spec.kappa() - 1e-12);
    }
}
