#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrf/errors.hpp"
#include "mrf/rational.hpp"

namespace mrf {

enum class Sense { maximize, minimize };
enum class Rel { le, eq, ge };

struct LpVariable {
    std::string id;
    std::optional<Rat> lower;  // nullopt = unbounded below
    std::optional<Rat> upper;
};

struct LpConstraint {
    std::string id;
    std::map<std::string, Rat> coeffs;
    Rel rel = Rel::le;
    Rat rhs;
};

struct LinearProgram {
    Sense sense = Sense::maximize;
    std::vector<LpVariable> variables;
    std::map<std::string, Rat> objective;
    std::vector<LpConstraint> constraints;

    void add_variable(const std::string& id, std::optional<Rat> lower = Rat(0),
                      std::optional<Rat> upper = std::nullopt);
    void add_constraint(const std::string& id, std::map<std::string, Rat> coeffs, Rel rel,
                        Rat rhs);
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Rat value;
    std::map<std::string, Rat> primal;  // variable id -> value
    std::map<std::string, Rat> dual;    // constraint id -> multiplier
};

// Deterministic exact simplex. Pivot rule: steepest coefficient with
// lexicographic tie-breaks, falling back to Bland's rule permanently once the
// objective stalls, which guarantees termination.
LpSolution solve_lp(const LinearProgram& lp);

// Throws ValidationError unless (primal, dual) is an exact optimality
// certificate pair for lp: primal feasibility, dual sign conditions,
// complementary slackness, and primal value = dual value.
void check_certificates(const LinearProgram& lp, const LpSolution& sol);

// Human-readable listing (variables with bounds, objective, constraints).
std::string dump_lp(const LinearProgram& lp);

}  // namespace mrf
