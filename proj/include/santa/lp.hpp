#pragma once

#include "santa/error.hpp"
#include "santa/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace santa::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

inline const char* status_name(Status s)
{
    switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    }
    return "?";
}

struct Constraint {
    std::vector<Rational> coefficients;
    Relation relation = Relation::LessEqual;
    Rational rhs;
};

/// All variables are implicitly non-negative.
struct LinearProgram {
    Sense sense = Sense::Minimize;
    std::vector<Rational> objective;
    std::vector<Constraint> constraints;

    [[nodiscard]] std::size_t variable_count() const noexcept { return objective.size(); }
};

/// Duals follow the convention objective == sum_i rhs_i * dual_i. For a
/// minimization, a >= row has dual >= 0 and a <= row has dual <= 0; signs
/// flip for a maximization.
struct Outcome {
    Status status = Status::Infeasible;
    std::vector<Rational> primal;
    std::vector<Rational> dual;
    Rational objective;
};

namespace detail {

/// Dense tableau for the two-phase method. Columns are laid out as
/// structural variables, then one slack/surplus per inequality row, then one
/// artificial per >=/= row. Bland's rule picks the lowest column index.
class Tableau {
public:
    explicit Tableau(const LinearProgram& lp)
        : rows_(lp.constraints.size())
        , structural_(lp.variable_count())
    {
        flipped_.assign(rows_, false);
        std::vector<Relation> relation(rows_);
        std::size_t slacks = 0;
        std::size_t artificials = 0;
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto& c = lp.constraints[i];
            relation[i] = c.relation;
            if (c.rhs < 0) {
                flipped_[i] = true;
                if (c.relation == Relation::LessEqual) {
                    relation[i] = Relation::GreaterEqual;
                } else if (c.relation == Relation::GreaterEqual) {
                    relation[i] = Relation::LessEqual;
                }
            }
            if (relation[i] != Relation::Equal) {
                ++slacks;
            }
            if (relation[i] != Relation::LessEqual) {
                ++artificials;
            }
        }
        artificial_begin_ = structural_ + slacks;
        columns_ = artificial_begin_ + artificials;

        cells_.assign(rows_, std::vector<Rational>(columns_ + 1));
        basis_.assign(rows_, 0);
        unit_column_.assign(rows_, 0);

        std::size_t next_slack = structural_;
        std::size_t next_artificial = artificial_begin_;
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto& c = lp.constraints[i];
            const Rational sign = flipped_[i] ? Rational(-1) : Rational(1);
            for (std::size_t j = 0; j < structural_; ++j) {
                cells_[i][j] = sign * c.coefficients[j];
            }
            cells_[i][columns_] = sign * c.rhs;
            switch (relation[i]) {
            case Relation::LessEqual:
                cells_[i][next_slack] = 1;
                basis_[i] = unit_column_[i] = next_slack++;
                break;
            case Relation::GreaterEqual:
                cells_[i][next_slack++] = -1;
                cells_[i][next_artificial] = 1;
                basis_[i] = unit_column_[i] = next_artificial++;
                break;
            case Relation::Equal:
                cells_[i][next_artificial] = 1;
                basis_[i] = unit_column_[i] = next_artificial++;
                break;
            }
        }
    }

    [[nodiscard]] bool is_artificial(std::size_t j) const noexcept { return j >= artificial_begin_; }

    /// Runs phase 1 and returns false when the artificial sum cannot reach zero.
    bool phase_one()
    {
        std::vector<Rational> cost(columns_);
        for (std::size_t j = artificial_begin_; j < columns_; ++j) {
            cost[j] = 1;
        }
        price(cost);
        optimize(true);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (is_artificial(basis_[i]) && cells_[i][columns_] != 0) {
                return false;
            }
        }
        // Drive zero-level artificials out where possible; rows left behind
        // are redundant and never win a ratio test in phase 2.
        for (std::size_t i = 0; i < rows_; ++i) {
            if (!is_artificial(basis_[i])) {
                continue;
            }
            for (std::size_t j = 0; j < artificial_begin_; ++j) {
                if (cells_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
        return true;
    }

    /// Returns false on unboundedness.
    bool phase_two(const std::vector<Rational>& structural_cost)
    {
        std::vector<Rational> cost(columns_);
        for (std::size_t j = 0; j < structural_; ++j) {
            cost[j] = structural_cost[j];
        }
        price(cost);
        return optimize(false);
    }

    [[nodiscard]] std::vector<Rational> primal() const
    {
        std::vector<Rational> x(structural_);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < structural_) {
                x[basis_[i]] = cells_[i][columns_];
            }
        }
        return x;
    }

    /// Row multipliers for the internal (minimization) costs, undoing row flips.
    [[nodiscard]] std::vector<Rational> dual() const
    {
        std::vector<Rational> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            // unit column has zero phase-2 cost, so y_i = -(reduced cost)
            Rational v = -reduced_[unit_column_[i]];
            y[i] = flipped_[i] ? Rational(-v) : v;
        }
        return y;
    }

private:
    void price(const std::vector<Rational>& cost)
    {
        cost_ = cost;
        reduced_ = cost;
        reduced_.resize(columns_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Rational& cb = cost_[basis_[i]];
            if (cb == 0) {
                continue;
            }
            for (std::size_t j = 0; j <= columns_; ++j) {
                if (cells_[i][j] != 0) {
                    reduced_[j] -= cb * cells_[i][j];
                }
            }
        }
    }

    bool optimize(bool allow_artificial)
    {
        for (;;) {
            std::optional<std::size_t> entering;
            for (std::size_t j = 0; j < columns_; ++j) {
                if (!allow_artificial && is_artificial(j)) {
                    continue;
                }
                if (reduced_[j] < 0) {
                    entering = j;
                    break;
                }
            }
            if (!entering) {
                return true;
            }
            std::optional<std::size_t> leaving;
            Rational best_ratio;
            for (std::size_t i = 0; i < rows_; ++i) {
                const Rational& a = cells_[i][*entering];
                if (a <= 0) {
                    continue;
                }
                Rational ratio = cells_[i][columns_] / a;
                if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leaving])) {
                    leaving = i;
                    best_ratio = std::move(ratio);
                }
            }
            if (!leaving) {
                return false;
            }
            pivot(*leaving, *entering);
        }
    }

    void pivot(std::size_t row, std::size_t col)
    {
        const Rational inv = Rational(1) / cells_[row][col];
        for (std::size_t j = 0; j <= columns_; ++j) {
            if (cells_[row][j] != 0) {
                cells_[row][j] *= inv;
            }
        }
        auto eliminate = [&](std::vector<Rational>& target) {
            const Rational factor = target[col];
            if (factor == 0) {
                return;
            }
            for (std::size_t j = 0; j <= columns_; ++j) {
                if (cells_[row][j] != 0) {
                    target[j] -= factor * cells_[row][j];
                }
            }
        };
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i != row) {
                eliminate(cells_[i]);
            }
        }
        eliminate(reduced_);
        basis_[row] = col;
    }

    std::size_t rows_;
    std::size_t structural_;
    std::size_t artificial_begin_ = 0;
    std::size_t columns_ = 0;
    std::vector<std::vector<Rational>> cells_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> unit_column_;
    std::vector<bool> flipped_;
    std::vector<Rational> cost_;
    std::vector<Rational> reduced_;
};

} // namespace detail

inline void check_dimensions(const LinearProgram& lp)
{
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        if (lp.constraints[i].coefficients.size() != lp.variable_count()) {
            throw Error(ErrorCode::DimensionMismatch,
                        "row " + std::to_string(i) + " has " + std::to_string(lp.constraints[i].coefficients.size())
                            + " coefficients, objective has " + std::to_string(lp.variable_count()));
        }
    }
}

/// Two-phase primal simplex over exact rationals with Bland's rule.
inline Outcome solve(const LinearProgram& lp)
{
    check_dimensions(lp);
    detail::Tableau tableau(lp);
    Outcome out;
    if (!tableau.phase_one()) {
        out.status = Status::Infeasible;
        return out;
    }
    const bool maximize = lp.sense == Sense::Maximize;
    std::vector<Rational> cost = lp.objective;
    if (maximize) {
        for (auto& c : cost) {
            c = -c;
        }
    }
    if (!tableau.phase_two(cost)) {
        out.status = Status::Unbounded;
        return out;
    }
    out.status = Status::Optimal;
    out.primal = tableau.primal();
    out.dual = tableau.dual();
    if (maximize) {
        for (auto& y : out.dual) {
            y = -y;
        }
    }
    out.objective = 0;
    for (std::size_t j = 0; j < out.primal.size(); ++j) {
        out.objective += lp.objective[j] * out.primal[j];
    }
    return out;
}

/// Exact optimality check independent of how the outcome was produced:
/// primal feasibility, dual sign and feasibility, and equal objectives.
/// Returns an empty string on success, otherwise the first failure.
inline std::string certify_optimal(const LinearProgram& lp, const Outcome& out)
{
    if (out.status != Status::Optimal) {
        return "outcome is not Optimal";
    }
    const std::size_t n = lp.variable_count();
    const std::size_t m = lp.constraints.size();
    if (out.primal.size() != n || out.dual.size() != m) {
        return "solution has wrong dimensions";
    }
    const bool maximize = lp.sense == Sense::Maximize;
    for (std::size_t j = 0; j < n; ++j) {
        if (out.primal[j] < 0) {
            return "x" + std::to_string(j) + " negative";
        }
    }
    Rational dual_objective = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        Rational lhs = 0;
        for (std::size_t j = 0; j < n; ++j) {
            lhs += c.coefficients[j] * out.primal[j];
        }
        const Rational& y = out.dual[i];
        switch (c.relation) {
        case Relation::LessEqual:
            if (lhs > c.rhs) return "row " + std::to_string(i) + " violated";
            if (maximize ? y < 0 : y > 0) return "dual " + std::to_string(i) + " has wrong sign";
            break;
        case Relation::GreaterEqual:
            if (lhs < c.rhs) return "row " + std::to_string(i) + " violated";
            if (maximize ? y > 0 : y < 0) return "dual " + std::to_string(i) + " has wrong sign";
            break;
        case Relation::Equal:
            if (lhs != c.rhs) return "row " + std::to_string(i) + " violated";
            break;
        }
        if (y != 0 && lhs != c.rhs) {
            return "complementary slackness fails on row " + std::to_string(i);
        }
        dual_objective += c.rhs * y;
    }
    Rational primal_objective = 0;
    for (std::size_t j = 0; j < n; ++j) {
        Rational reduced = lp.objective[j];
        for (std::size_t i = 0; i < m; ++i) {
            reduced -= out.dual[i] * lp.constraints[i].coefficients[j];
        }
        if (maximize ? reduced > 0 : reduced < 0) {
            return "reduced cost of x" + std::to_string(j) + " has wrong sign";
        }
        if (reduced != 0 && out.primal[j] != 0) {
            return "complementary slackness fails on x" + std::to_string(j);
        }
        primal_objective += lp.objective[j] * out.primal[j];
    }
    if (primal_objective != out.objective || dual_objective != out.objective) {
        return "objectives differ: primal " + santa::to_string(primal_objective) + ", dual " + santa::to_string(dual_objective)
            + ", reported " + santa::to_string(out.objective);
    }
    return {};
}

} // namespace santa::lp
