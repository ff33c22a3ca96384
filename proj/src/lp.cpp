#include "fttc/lp.hpp"

#include <limits>

#include "fttc/errors.hpp"

namespace fttc::lp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Tableau {
public:
    // rows_[r] has `cols_ + 1` entries; the last one is the right-hand side.
    std::vector<std::vector<Rational>> rows;
    std::vector<std::size_t> basis;
    std::size_t cols = 0;

    [[nodiscard]] const Rational& rhs(std::size_t r) const { return rows[r][cols]; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<Rational>& reduced) {
        auto& prow = rows[pr];
        const Rational inv = Rational(1) / prow[pc];
        std::vector<std::size_t> nz;
        for (std::size_t c = 0; c <= cols; ++c) {
            if (prow[c].is_zero()) continue;
            prow[c] *= inv;
            nz.push_back(c);
        }
        auto eliminate = [&](std::vector<Rational>& row) {
            if (row[pc].is_zero()) return;
            const Rational f = row[pc];
            for (std::size_t c : nz) row[c] -= f * prow[c];
        };
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != pr) eliminate(rows[r]);
        }
        eliminate(reduced);
        basis[pr] = pc;
    }

    // Reduced costs d_j = c_j - c_B B^-1 A_j, stored with the objective value
    // (negated) in the last slot.
    [[nodiscard]] std::vector<Rational> reduced_costs(const std::vector<Rational>& cost) const {
        std::vector<Rational> d(cols + 1);
        for (std::size_t c = 0; c < cols; ++c) d[c] = cost[c];
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Rational& cb = cost[basis[r]];
            if (cb.is_zero()) continue;
            for (std::size_t c = 0; c <= cols; ++c) {
                if (!rows[r][c].is_zero()) d[c] -= cb * rows[r][c];
            }
        }
        return d;
    }

    // Maximizes cost . x over columns with allowed[c]; false when unbounded.
    bool optimize(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
        auto d = reduced_costs(cost);
        for (;;) {
            std::size_t enter = kNone;
            for (std::size_t c = 0; c < cols; ++c) {
                if (allowed[c] && d[c].is_positive()) {
                    enter = c;
                    break;
                }
            }
            if (enter == kNone) return true;
            std::size_t leave = kNone;
            Rational best;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const auto& a = rows[r][enter];
                if (!a.is_positive()) continue;
                Rational ratio = rhs(r) / a;
                if (leave == kNone || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = std::move(ratio);
                }
            }
            if (leave == kNone) return false;
            pivot(leave, enter, d);
        }
    }
};

}  // namespace

Result solve(const LinearProgram& program) {
    const std::size_t n = program.num_vars;
    const std::size_t m = program.constraints.size();

    // Column layout: [original | slack/surplus | artificial].
    std::size_t num_slack = 0;
    std::size_t num_art = 0;
    struct RowPlan {
        bool flip;
        Sense sense;
        std::size_t slack = kNone;
        std::size_t art = kNone;
    };
    std::vector<RowPlan> plan(m);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& con = program.constraints[r];
        RowPlan p{con.rhs.is_negative(), con.sense};
        if (p.flip && p.sense == Sense::LessEqual) p.sense = Sense::GreaterEqual;
        else if (p.flip && p.sense == Sense::GreaterEqual) p.sense = Sense::LessEqual;
        if (p.sense != Sense::Equal) p.slack = n + num_slack++;
        plan[r] = p;
    }
    for (auto& p : plan) {
        if (p.sense != Sense::LessEqual) p.art = n + num_slack + num_art++;
    }

    Tableau t;
    t.cols = n + num_slack + num_art;
    t.rows.assign(m, std::vector<Rational>(t.cols + 1));
    t.basis.assign(m, kNone);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& con = program.constraints[r];
        const Rational sign(plan[r].flip ? -1 : 1);
        auto& row = t.rows[r];
        for (const auto& [var, coef] : con.terms) {
            if (var >= n) throw EngineError("lp: variable index out of range");
            row[var] += sign * coef;
        }
        row[t.cols] = sign * con.rhs;
        if (plan[r].slack != kNone) {
            row[plan[r].slack] = Rational(plan[r].sense == Sense::LessEqual ? 1 : -1);
        }
        if (plan[r].sense == Sense::LessEqual) {
            t.basis[r] = plan[r].slack;
        } else {
            row[plan[r].art] = Rational(1);
            t.basis[r] = plan[r].art;
        }
    }

    const std::size_t first_art = n + num_slack;
    std::vector<bool> allowed(t.cols, true);

    if (num_art > 0) {
        std::vector<Rational> phase1(t.cols);
        for (std::size_t c = first_art; c < t.cols; ++c) phase1[c] = Rational(-1);
        t.optimize(phase1, allowed);
        Rational infeasibility;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            if (t.basis[r] >= first_art) infeasibility += t.rhs(r);
        }
        if (infeasibility.is_positive()) return Result{Status::Infeasible, {}, {}};

        // Drive zero-valued artificials out of the basis; drop redundant rows.
        std::vector<Rational> scratch(t.cols + 1);
        for (std::size_t r = 0; r < t.rows.size();) {
            if (t.basis[r] < first_art) {
                ++r;
                continue;
            }
            std::size_t col = kNone;
            for (std::size_t c = 0; c < first_art; ++c) {
                if (!t.rows[r][c].is_zero()) {
                    col = c;
                    break;
                }
            }
            if (col == kNone) {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(r));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(r));
                continue;
            }
            t.pivot(r, col, scratch);
            ++r;
        }
        for (std::size_t c = first_art; c < t.cols; ++c) allowed[c] = false;
    }

    std::vector<Rational> cost(t.cols);
    for (std::size_t c = 0; c < n && c < program.objective.size(); ++c) cost[c] = program.objective[c];
    if (!t.optimize(cost, allowed)) return Result{Status::Unbounded, {}, {}};

    Result res;
    res.status = Status::Optimal;
    res.x.assign(n, Rational());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.basis[r] < n) res.x[t.basis[r]] = t.rhs(r);
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (!res.x[c].is_zero() && c < program.objective.size()) res.value += program.objective[c] * res.x[c];
    }
    return res;
}

}  // namespace fttc::lp
