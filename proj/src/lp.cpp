#include "mrf/lp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace mrf {

void LinearProgram::add_variable(const std::string& id, std::optional<Rat> lower,
                                 std::optional<Rat> upper) {
    variables.push_back(LpVariable{id, std::move(lower), std::move(upper)});
}

void LinearProgram::add_constraint(const std::string& id, std::map<std::string, Rat> coeffs,
                                   Rel rel, Rat rhs) {
    constraints.push_back(LpConstraint{id, std::move(coeffs), rel, std::move(rhs)});
}

void LinearProgram::validate() const {
    std::set<std::string> vars;
    for (const LpVariable& v : variables)
        if (!vars.insert(v.id).second) throw ValidationError("duplicate variable " + v.id);
    for (const auto& [id, c] : objective)
        if (!vars.count(id)) throw ValidationError("objective references unknown variable " + id);
    std::set<std::string> cons;
    for (const LpConstraint& c : constraints) {
        if (!cons.insert(c.id).second) throw ValidationError("duplicate constraint " + c.id);
        for (const auto& [vid, coef] : c.coeffs)
            if (!vars.count(vid))
                throw ValidationError("constraint " + c.id + " references unknown variable " + vid);
    }
}

namespace {

// How a user variable maps to non-negative internal column(s).
struct VarMap {
    enum Kind { shifted, negated, split } kind;
    int col = -1;       // primary column
    int col_neg = -1;   // negative part for split
    Rat offset;         // lb for shifted, ub for negated
};

class Simplex {
public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp) { build(); }

    LpSolution run() {
        LpSolution sol;
        if (inconsistent_bounds_) {
            sol.status = LpStatus::infeasible;
            return sol;
        }
        init_tableau();
        if (!phase1()) {
            sol.status = LpStatus::infeasible;
            return sol;
        }
        if (!phase2()) {
            sol.status = LpStatus::unbounded;
            return sol;
        }
        extract(sol);
        return sol;
    }

private:
    const LinearProgram& lp_;
    bool inconsistent_bounds_ = false;

    std::vector<VarMap> vmap_;
    int nstruct_ = 0;  // structural + slack columns (everything but artificials)
    int ncols_ = 0;    // including artificials
    // Rows: user constraints first (original order), then internal bound rows.
    struct Row {
        std::map<int, Rat> coeffs;  // structural columns
        Rel rel;
        Rat rhs;
        int user_index;  // -1 for bound rows
    };
    std::vector<Row> rows_;
    std::vector<Rat> sigma_;  // +-1 normalization per row
    std::vector<int> art_col_;
    std::vector<std::vector<Rat>> T_;  // m x (ncols_+1)
    std::vector<Rat> d1_, d2_;         // reduced-cost rows, length ncols_+1
    std::vector<Rat> c2_;              // internal phase-2 costs
    std::vector<int> basis_;
    std::vector<bool> redundant_;
    std::map<std::string, int> vidx_;
    Rat s_;  // -1 for maximize, +1 for minimize

    void build() {
        s_ = lp_.sense == Sense::maximize ? -1 : 1;
        for (std::size_t j = 0; j < lp_.variables.size(); ++j)
            vidx_[lp_.variables[j].id] = static_cast<int>(j);
        vmap_.resize(lp_.variables.size());
        int col = 0;
        for (std::size_t j = 0; j < lp_.variables.size(); ++j) {
            const LpVariable& v = lp_.variables[j];
            if (v.lower && v.upper && *v.lower > *v.upper) inconsistent_bounds_ = true;
            if (v.lower) {
                vmap_[j] = VarMap{VarMap::shifted, col++, -1, *v.lower};
                if (v.upper) {
                    Row r;
                    r.coeffs[vmap_[j].col] = 1;
                    r.rel = Rel::le;
                    r.rhs = *v.upper - *v.lower;
                    r.user_index = -1;
                    rows_.push_back(std::move(r));
                }
            } else if (v.upper) {
                vmap_[j] = VarMap{VarMap::negated, col++, -1, *v.upper};
            } else {
                vmap_[j] = VarMap{VarMap::split, col, col + 1, Rat(0)};
                col += 2;
            }
        }
        // user constraints go before the bound rows already collected
        std::vector<Row> bound_rows = std::move(rows_);
        rows_.clear();
        for (std::size_t i = 0; i < lp_.constraints.size(); ++i) {
            const LpConstraint& c = lp_.constraints[i];
            Row r;
            r.rel = c.rel;
            r.rhs = c.rhs;
            r.user_index = static_cast<int>(i);
            for (const auto& [vid, coef] : c.coeffs) {
                int j = var_index(vid);
                apply_coeff(r, j, coef);
            }
            rows_.push_back(std::move(r));
        }
        for (Row& r : bound_rows) rows_.push_back(std::move(r));

        // slack/surplus columns
        int nvarcols = col;
        for (Row& r : rows_) {
            if (r.rel == Rel::le)
                r.coeffs[col++] = 1;
            else if (r.rel == Rel::ge)
                r.coeffs[col++] = -1;
        }
        nstruct_ = col;
        art_col_.resize(rows_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) art_col_[i] = col++;
        ncols_ = col;

        // internal phase-2 costs (minimization)
        c2_.assign(ncols_, Rat(0));
        for (const auto& [vid, coef] : lp_.objective) {
            int j = var_index(vid);
            const VarMap& m = vmap_[j];
            switch (m.kind) {
                case VarMap::shifted: c2_[m.col] += s_ * coef; break;
                case VarMap::negated: c2_[m.col] -= s_ * coef; break;
                case VarMap::split:
                    c2_[m.col] += s_ * coef;
                    c2_[m.col_neg] -= s_ * coef;
                    break;
            }
        }
        (void)nvarcols;
    }

    int var_index(const std::string& id) const {
        auto it = vidx_.find(id);
        if (it == vidx_.end()) throw ValidationError("unknown variable " + id);
        return it->second;
    }

    void apply_coeff(Row& r, int j, const Rat& coef) {
        const VarMap& m = vmap_[j];
        switch (m.kind) {
            case VarMap::shifted:
                r.coeffs[m.col] += coef;
                r.rhs -= coef * m.offset;
                break;
            case VarMap::negated:
                r.coeffs[m.col] -= coef;
                r.rhs -= coef * m.offset;
                break;
            case VarMap::split:
                r.coeffs[m.col] += coef;
                r.coeffs[m.col_neg] -= coef;
                break;
        }
    }

    void init_tableau() {
        std::size_t m = rows_.size();
        sigma_.assign(m, Rat(1));
        T_.assign(m, std::vector<Rat>(ncols_ + 1, Rat(0)));
        basis_.resize(m);
        redundant_.assign(m, false);
        for (std::size_t i = 0; i < m; ++i) {
            Rat sg = sgn(rows_[i].rhs) < 0 ? Rat(-1) : Rat(1);
            sigma_[i] = sg;
            for (const auto& [c, v] : rows_[i].coeffs) T_[i][c] = sg * v;
            T_[i][art_col_[i]] = 1;
            T_[i][ncols_] = sg * rows_[i].rhs;
            basis_[i] = art_col_[i];
        }
        // reduced costs vs. the all-artificial basis
        d1_.assign(ncols_ + 1, Rat(0));
        d2_.assign(ncols_ + 1, Rat(0));
        for (int j = 0; j < ncols_; ++j) d2_[j] = c2_[j];
        for (std::size_t i = 0; i < m; ++i)
            for (int j = 0; j <= ncols_; ++j) d1_[j] -= T_[i][j];
        for (std::size_t i = 0; i < m; ++i) d1_[art_col_[i]] = 0;
    }

    void pivot(std::size_t r, int c) {
        Rat p = T_[r][c];
        for (int j = 0; j <= ncols_; ++j) T_[r][j] /= p;
        for (std::size_t i = 0; i < T_.size(); ++i) {
            if (i == r || sgn(T_[i][c]) == 0) continue;
            Rat f = T_[i][c];
            for (int j = 0; j <= ncols_; ++j) T_[i][j] -= f * T_[r][j];
        }
        for (std::vector<Rat>* d : {&d1_, &d2_}) {
            if (sgn((*d)[c]) == 0) continue;
            Rat f = (*d)[c];
            for (int j = 0; j <= ncols_; ++j) (*d)[j] -= f * T_[r][j];
        }
        basis_[r] = c;
    }

    // Returns false when no entering column exists.
    bool choose_entering(const std::vector<Rat>& d, int limit_cols, bool bland, int& out) const {
        int best = -1;
        for (int j = 0; j < limit_cols; ++j) {
            if (sgn(d[j]) >= 0) continue;
            if (bland) {
                out = j;
                return true;
            }
            if (best == -1 || d[j] < d[best]) best = j;
        }
        out = best;
        return best != -1;
    }

    // Returns false when the column is unbounded.
    bool choose_leaving(int c, std::size_t& out) const {
        bool found = false;
        Rat best;
        for (std::size_t i = 0; i < T_.size(); ++i) {
            if (sgn(T_[i][c]) <= 0) continue;
            Rat ratio = T_[i][ncols_] / T_[i][c];
            if (!found || ratio < best || (ratio == best && basis_[i] < basis_[out])) {
                best = ratio;
                out = i;
                found = true;
            }
        }
        return found;
    }

    bool optimize(std::vector<Rat>& d, int limit_cols, bool* unbounded) {
        bool bland = false;
        int stall = 0;
        Rat last_obj = d[ncols_];
        while (true) {
            int c;
            if (!choose_entering(d, limit_cols, bland, c)) return true;
            std::size_t r;
            if (!choose_leaving(c, r)) {
                if (unbounded) *unbounded = true;
                return false;
            }
            pivot(r, c);
            if (d[ncols_] == last_obj) {
                if (++stall > 64) bland = true;
            } else {
                stall = 0;
                last_obj = d[ncols_];
            }
        }
    }

    bool phase1() {
        optimize(d1_, nstruct_, nullptr);
        // phase-1 objective value = -d1_[ncols_]
        if (sgn(d1_[ncols_]) != 0) return false;
        // drive artificials out of the basis
        for (std::size_t i = 0; i < T_.size(); ++i) {
            if (basis_[i] < nstruct_) continue;
            int c = -1;
            for (int j = 0; j < nstruct_; ++j)
                if (sgn(T_[i][j]) != 0) {
                    c = j;
                    break;
                }
            if (c == -1)
                redundant_[i] = true;  // all-zero row; artificial stays basic at 0
            else
                pivot(i, c);
        }
        return true;
    }

    bool phase2() {
        bool unbounded = false;
        optimize(d2_, nstruct_, &unbounded);
        return !unbounded;
    }

    void extract(LpSolution& sol) const {
        sol.status = LpStatus::optimal;
        std::vector<Rat> x(ncols_, Rat(0));
        for (std::size_t i = 0; i < T_.size(); ++i) x[basis_[i]] = T_[i][ncols_];
        for (std::size_t j = 0; j < lp_.variables.size(); ++j) {
            const VarMap& m = vmap_[j];
            Rat v;
            switch (m.kind) {
                case VarMap::shifted: v = m.offset + x[m.col]; break;
                case VarMap::negated: v = m.offset - x[m.col]; break;
                case VarMap::split: v = x[m.col] - x[m.col_neg]; break;
            }
            sol.primal[lp_.variables[j].id] = v;
        }
        sol.value = 0;
        for (const auto& [vid, coef] : lp_.objective) sol.value += coef * sol.primal.at(vid);
        for (std::size_t i = 0; i < T_.size(); ++i) {
            if (rows_[i].user_index < 0) continue;
            // internal standard dual of row i sits in the artificial column
            Rat ytilde = -d2_[art_col_[i]];
            sol.dual[lp_.constraints[rows_[i].user_index].id] = s_ * sigma_[i] * ytilde;
        }
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    lp.validate();
    Simplex simplex(lp);
    return simplex.run();
}

void check_certificates(const LinearProgram& lp, const LpSolution& sol) {
    lp.validate();
    if (sol.status != LpStatus::optimal) throw ValidationError("certificate check: not optimal");
    bool maximize = lp.sense == Sense::maximize;
    // primal feasibility
    Rat obj = 0;
    for (const LpVariable& v : lp.variables) {
        auto it = sol.primal.find(v.id);
        if (it == sol.primal.end()) throw ValidationError("primal misses variable " + v.id);
        if (v.lower && it->second < *v.lower)
            throw ValidationError("variable " + v.id + " below lower bound");
        if (v.upper && it->second > *v.upper)
            throw ValidationError("variable " + v.id + " above upper bound");
    }
    for (const auto& [vid, c] : lp.objective) obj += c * sol.primal.at(vid);
    if (obj != sol.value) throw ValidationError("objective value mismatch");
    for (const LpConstraint& c : lp.constraints) {
        Rat lhs = 0;
        for (const auto& [vid, coef] : c.coeffs) lhs += coef * sol.primal.at(vid);
        bool ok = c.rel == Rel::le ? lhs <= c.rhs : c.rel == Rel::ge ? lhs >= c.rhs : lhs == c.rhs;
        if (!ok) throw ValidationError("constraint " + c.id + " violated by primal");
        auto it = sol.dual.find(c.id);
        if (it == sol.dual.end()) throw ValidationError("dual misses constraint " + c.id);
        const Rat& y = it->second;
        if (c.rel == Rel::le && ((maximize && sgn(y) < 0) || (!maximize && sgn(y) > 0)))
            throw ValidationError("dual sign violated on " + c.id);
        if (c.rel == Rel::ge && ((maximize && sgn(y) > 0) || (!maximize && sgn(y) < 0)))
            throw ValidationError("dual sign violated on " + c.id);
        if (sgn(y) != 0 && lhs != c.rhs)
            throw ValidationError("complementary slackness violated on " + c.id);
    }
    // reduced costs and bound complementarity
    Rat dual_obj = 0;
    for (const LpConstraint& c : lp.constraints) dual_obj += sol.dual.at(c.id) * c.rhs;
    for (const LpVariable& v : lp.variables) {
        Rat r = 0;
        auto it = lp.objective.find(v.id);
        if (it != lp.objective.end()) r = it->second;
        for (const LpConstraint& c : lp.constraints) {
            auto jt = c.coeffs.find(v.id);
            if (jt != c.coeffs.end()) r -= sol.dual.at(c.id) * jt->second;
        }
        const Rat& x = sol.primal.at(v.id);
        if (sgn(r) > 0) {
            // maximize: only profitable at the upper bound; minimize: lower
            const std::optional<Rat>& b = maximize ? v.upper : v.lower;
            if (!b || x != *b)
                throw ValidationError("reduced cost of " + v.id + " positive off its bound");
            dual_obj += r * *b;
        } else if (sgn(r) < 0) {
            const std::optional<Rat>& b = maximize ? v.lower : v.upper;
            if (!b || x != *b)
                throw ValidationError("reduced cost of " + v.id + " negative off its bound");
            dual_obj += r * *b;
        }
    }
    if (dual_obj != sol.value)
        throw ValidationError("strong duality violated: dual " + rat_str(dual_obj) + " vs primal " +
                              rat_str(sol.value));
}

std::string dump_lp(const LinearProgram& lp) {
    std::ostringstream os;
    os << (lp.sense == Sense::maximize ? "maximize" : "minimize");
    bool first = true;
    for (const auto& [vid, c] : lp.objective) {
        os << (first ? " " : " + ") << rat_str(c) << "*" << vid;
        first = false;
    }
    if (first) os << " 0";
    os << "\nsubject to\n";
    for (const LpConstraint& c : lp.constraints) {
        os << "  " << c.id << ":";
        for (const auto& [vid, coef] : c.coeffs) os << " + " << rat_str(coef) << "*" << vid;
        os << (c.rel == Rel::le ? " <= " : c.rel == Rel::ge ? " >= " : " = ") << rat_str(c.rhs)
           << "\n";
    }
    os << "bounds\n";
    for (const LpVariable& v : lp.variables) {
        os << "  " << (v.lower ? rat_str(*v.lower) : std::string("-inf")) << " <= " << v.id
           << " <= " << (v.upper ? rat_str(*v.upper) : std::string("+inf")) << "\n";
    }
    return os.str();
}

}  // namespace mrf
