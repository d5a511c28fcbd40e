#include "grothcover/instances.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace grothcover {

PredicateTemplate PredicateTemplate::from_op(const std::string& op, bool neg_i,
                                             bool neg_j) {
    PredicateTemplate t;
    for (int xi = 0; xi <= 1; ++xi) {
        for (int xj = 0; xj <= 1; ++xj) {
            const bool li = neg_i ? xi == 0 : xi == 1;
            const bool lj = neg_j ? xj == 0 : xj == 1;
            bool v = false;
            if (op == "and") {
                v = li && lj;
            } else if (op == "or") {
                v = li || lj;
            } else if (op == "xor") {
                v = li != lj;
            } else if (op == "implies") {
                v = !li || lj;
            } else if (op == "lit") {
                v = li;
            } else {
                throw std::invalid_argument("unknown predicate op: " + op);
            }
            t.truth_table[2 * xi + xj] = v;
        }
    }
    return t;
}

void CspInstance::validate() const {
    if (n < 1) {
        throw std::invalid_argument("CspInstance: n must be ≥ 1");
    }
    if (constraints.empty()) {
        throw std::invalid_argument("CspInstance: needs at least 1 constraint");
    }
    if (weights.size() != constraints.size()) {
        throw std::invalid_argument("CspInstance: weight/constraint size mismatch");
    }
    for (std::size_t k = 0; k < constraints.size(); ++k) {
        const auto& c = constraints[k];
        if (c.i < 1 || c.i > n || c.j < 1 || c.j > n) {
            throw std::invalid_argument("CspInstance: variable index out of range");
        }
        if (c.tmpl.identically_false()) {
            throw std::invalid_argument(
                "CspInstance: identically false template not allowed");
        }
        if (!(weights[k] >= 0.0)) {
            throw std::invalid_argument("CspInstance: negative weight");
        }
    }
}

Vec CspInstance::weight_vector() const {
    Vec w(static_cast<int>(weights.size()));
    for (std::size_t k = 0; k < weights.size(); ++k) {
        w(static_cast<int>(k)) = weights[k];
    }
    return w;
}

Mat delta_matrix(int sign_i, int i, int sign_j, int j, int n) {
    if (i < 1 || i > n || j < 1 || j > n) {
        throw std::invalid_argument("delta_matrix: index out of range");
    }
    if ((sign_i != 1 && sign_i != -1) || (sign_j != 1 && sign_j != -1)) {
        throw std::invalid_argument("delta_matrix: signs must be ±1");
    }
    return triangle_dense({i, j, sign_i, sign_j}, n + 1);
}

SparseSym constraint_matrix(const Constraint& c, int n) {
    if (c.i < 1 || c.i > n || c.j < 1 || c.j > n) {
        throw std::invalid_argument("constraint_matrix: index out of range");
    }
    SparseSym a;
    a.dim = n + 1;
    for (int xi = 0; xi <= 1; ++xi) {
        for (int xj = 0; xj <= 1; ++xj) {
            if (!c.tmpl.truth_table[2 * xi + xj]) {
                continue;
            }
            // [l_i ∧ l_j] = ¼⟨Δ_{σi,τj}, S_U⟩ with σ = ±1 per polarity.
            const SparseSym d =
                triangle_sparse({c.i, c.j, xi ? 1 : -1, xj ? 1 : -1}, n + 1);
            for (const auto& e : d.entries) {
                a.add(e.r, e.c, 0.25 * e.v);
            }
        }
    }
    return a;
}

bool satisfied(const Constraint& c, const std::vector<bool>& a) {
    const std::size_t i = static_cast<std::size_t>(c.i - 1);
    const std::size_t j = static_cast<std::size_t>(c.j - 1);
    if (i >= a.size() || j >= a.size()) {
        throw std::invalid_argument("satisfied: assignment too short");
    }
    return c.tmpl.eval(a[i], a[j]);
}

CspInstance encode_problem(ProblemKind kind, const std::vector<RawItem>& raw,
                           int n) {
    CspInstance inst;
    inst.n = n;
    for (const auto& item : raw) {
        if (!(item.weight >= 0.0)) {
            throw std::invalid_argument("encode_problem: negative weight");
        }
        Constraint c;
        c.i = item.i;
        c.j = item.j;
        switch (kind) {
            case ProblemKind::MAXCUT:
                c.tmpl = PredicateTemplate::from_op("xor", false, false);
                break;
            case ProblemKind::MAXDICUT:
                // arc u→v becomes x_u ∧ ¬x_v
                c.tmpl = PredicateTemplate::from_op("and", false, true);
                break;
            case ProblemKind::MAX2SAT:
                c.tmpl = PredicateTemplate::from_op("or", item.neg_i, item.neg_j);
                break;
            case ProblemKind::CSP:
                c.tmpl = PredicateTemplate::from_op(item.op, item.neg_i,
                                                    item.neg_j);
                break;
        }
        inst.constraints.push_back(c);
        inst.weights.push_back(item.weight);
    }
    inst.validate();
    return inst;
}

ConeSpec build_cone_spec(const CspInstance& inst) {
    inst.validate();
    std::vector<SparseSym> as;
    as.reserve(inst.constraints.size());
    for (const auto& c : inst.constraints) {
        as.push_back(constraint_matrix(c, inst.n));
    }
    return ConeSpec::polyhedral(inst.n + 1, std::move(as), 0.25,
                                DistKind::PSD_TRIANGLE);
}

ProblemKind problem_kind_from_string(const std::string& s) {
    if (s == "maxcut") return ProblemKind::MAXCUT;
    if (s == "maxdicut") return ProblemKind::MAXDICUT;
    if (s == "max2sat") return ProblemKind::MAX2SAT;
    if (s == "csp") return ProblemKind::CSP;
    throw std::invalid_argument("unknown problem kind: " + s);
}

std::string to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::MAXCUT: return "maxcut";
        case ProblemKind::MAXDICUT: return "maxdicut";
        case ProblemKind::MAX2SAT: return "max2sat";
        case ProblemKind::CSP: return "csp";
    }
    return "?";
}

bool all_xor(const CspInstance& inst) {
    const PredicateTemplate x = PredicateTemplate::from_op("xor", false, false);
    return std::all_of(inst.constraints.begin(), inst.constraints.end(),
                       [&](const Constraint& c) {
                           return c.tmpl.truth_table == x.truth_table;
                       });
}

CspInstance parse_instance_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("instance JSON parse error: ") +
                                    e.what());
    }
    if (!j.contains("kind") || !j.contains("n") || !j.contains("items")) {
        throw std::invalid_argument(
            "instance JSON needs fields kind, n, items");
    }
    const ProblemKind kind = problem_kind_from_string(j.at("kind"));
    const int n = j.at("n").get<int>();
    std::vector<RawItem> raw;
    for (const auto& it : j.at("items")) {
        RawItem r;
        r.i = it.at("i").get<int>();
        r.j = it.at("j").get<int>();
        r.neg_i = it.value("neg_i", false);
        r.neg_j = it.value("neg_j", false);
        r.op = it.value("op", std::string("and"));
        r.weight = it.value("weight", 1.0);
        raw.push_back(r);
    }
    return encode_problem(kind, raw, n);
}

CspInstance parse_instance_text(const std::string& text, ProblemKind kind) {
    std::istringstream is(text);
    std::string line;
    std::vector<RawItem> raw;
    int n = 0;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ls(line);
        RawItem r;
        if (!(ls >> r.i >> r.j >> r.weight)) {
            throw std::invalid_argument("instance text line " +
                                        std::to_string(lineno) +
                                        ": expected 'i j w'");
        }
        if (!(r.weight >= 0.0)) {
            throw std::invalid_argument("instance text line " +
                                        std::to_string(lineno) +
                                        ": negative weight");
        }
        n = std::max({n, r.i, r.j});
        raw.push_back(r);
    }
    return encode_problem(kind, raw, n);
}

}  // namespace grothcover
