#include "netforge/gfsolve.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace netforge {

namespace {

/// Largest attainable integer value of sum(coeff * x) + constant.
long long max_form_value(const ILPRow& row, int b) {
    long long sum = row.constant;
    for (const auto& t : row.terms) sum += static_cast<long long>(t.coeff) * (b - 1);
    return sum;
}

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

}  // namespace

ILPModel build_ilp(PrimeBase base, std::span<const Disequation> hard, std::span<const Disequation> weak) {
    ILPModel model;
    model.base = base;
    const int b = base.value();

    std::map<UnknownSlot, int> index;
    auto collect = [&](std::span<const Disequation> list) {
        for (const auto& d : list)
            for (const auto& [slot, coeff] : d.form.terms) index.emplace(slot, 0);
    };
    collect(hard);
    collect(weak);
    for (auto& [slot, idx] : index) {
        idx = static_cast<int>(model.variables.size());
        model.variables.push_back(slot);
    }

    auto to_row = [&](const Disequation& d, int source) {
        ILPRow row;
        for (const auto& [slot, coeff] : d.form.terms) {
            const Digit c = gf_reduce(coeff, base);
            if (c != 0) row.terms.push_back(ILPTerm{index.at(slot), c});
        }
        row.constant = gf_reduce(d.form.constant, base);
        row.source = source;
        return row;
    };

    for (std::size_t i = 0; i < hard.size(); ++i) {
        ILPRow row = to_row(hard[i], static_cast<int>(i));
        // 1 <= e + b k  with e <= max_sum  =>  k >= ceil((1 - max_sum) / b).
        row.k_lower = static_cast<int>(ceil_div(1 - max_form_value(row, b), b));
        row.k_upper = 0;
        if (row.terms.empty() && row.constant == 0) model.infeasible_at_build = true;
        model.hard.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < weak.size(); ++i) {
        if (!weak[i].weight) throw std::invalid_argument("weak disequation without weight");
        ILPRow row = to_row(weak[i], static_cast<int>(i));
        // nu = 0 needs e + b k = 0 for e up to max_sum.
        row.k_lower = static_cast<int>(ceil_div(-max_form_value(row, b), b));
        row.k_upper = 0;
        row.weight = weak[i].weight;
        model.weak.push_back(std::move(row));
    }
    return model;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Suboptimal: return "suboptimal";
        case SolveStatus::HardInfeasible: return "hard-infeasible";
        case SolveStatus::Unknown: return "unknown";
    }
    return "unknown";
}

SlotValues Assignment::slot_values(const ILPModel& model) const {
    SlotValues out;
    for (std::size_t i = 0; i < model.variables.size(); ++i) out.emplace(model.variables[i], values[i]);
    return out;
}

std::optional<Weight> evaluate(const ILPModel& model, std::span<const Digit> values) {
    if (values.size() != model.variables.size())
        throw std::invalid_argument("evaluate: expected " + std::to_string(model.variables.size()) + " values, got " +
                                    std::to_string(values.size()));
    const PrimeBase base = model.base;
    auto value_of = [&](const ILPRow& row) {
        long long acc = row.constant;
        for (const auto& t : row.terms) acc += static_cast<long long>(t.coeff) * values[static_cast<std::size_t>(t.var)];
        return gf_reduce(acc, base);
    };
    for (const auto& row : model.hard)
        if (value_of(row) == 0) return std::nullopt;
    Weight total{0};
    for (const auto& row : model.weak)
        if (value_of(row) != 0) total += *row.weight;
    return total;
}

namespace {

/// Depth-first branch and bound over the x variables. Weights are scaled to a
/// common denominator so the search runs on exact 64-bit integers.
class BranchAndBound {
public:
    BranchAndBound(const ILPModel& model, const SolveOptions& options)
        : model_(model), options_(options), b_(model.base.value()), n_(static_cast<int>(model.variables.size())) {}

    SolveResult run() {
        SolveResult result;
        if (model_.infeasible_at_build) {
            result.status = SolveStatus::HardInfeasible;
            return result;
        }
        setup();
        if (!trivially_infeasible_) {
            assigned_.assign(static_cast<std::size_t>(n_), 0);
            dfs(0);
        }
        result.nodes = nodes_;

        if (!have_incumbent_) {
            result.status = budget_exhausted_ ? SolveStatus::Unknown : SolveStatus::HardInfeasible;
            return result;
        }
        result.status = budget_exhausted_ && best_ < global_bound_ ? SolveStatus::Suboptimal : SolveStatus::Optimal;
        if (result.status == SolveStatus::Suboptimal && options_.polish) polish();
        finish(result.assignment);
        return result;
    }

private:
    struct Occurrence {
        int row;
        Digit coeff;
    };

    void setup() {
        const std::size_t hard_count = model_.hard.size();
        for (const auto& row : model_.hard) rows_.push_back(&row);
        for (const auto& row : model_.weak) rows_.push_back(&row);
        const std::size_t total = rows_.size();

        std::int64_t denom = 1;
        for (const auto& row : model_.weak) denom = std::lcm(denom, row.weight->denominator());
        scale_ = denom;
        weight_.assign(total, 0);
        for (std::size_t r = hard_count; r < total; ++r) {
            const Weight& w = *rows_[r]->weight;
            weight_[r] = w.numerator() * (denom / w.denominator());
        }
        is_hard_.assign(total, false);
        std::fill(is_hard_.begin(), is_hard_.begin() + static_cast<std::ptrdiff_t>(hard_count), true);

        // Static variable order: most constrained first.
        std::vector<long long> score(static_cast<std::size_t>(n_), 0);
        for (std::size_t r = 0; r < total; ++r)
            for (const auto& t : rows_[r]->terms) score[static_cast<std::size_t>(t.var)] += is_hard_[r] ? 1024 : 1;
        order_.resize(static_cast<std::size_t>(n_));
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int c) {
            return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(c)];
        });
        position_.assign(static_cast<std::size_t>(n_), 0);
        for (int d = 0; d < n_; ++d) position_[static_cast<std::size_t>(order_[static_cast<std::size_t>(d)])] = d;

        var_rows_.assign(static_cast<std::size_t>(n_), {});
        closing_.assign(static_cast<std::size_t>(n_), {});
        last_var_.assign(total, -1);
        last_coeff_.assign(total, 0);
        partial_.assign(total, 0);
        remaining_.assign(total, 0);
        closing_positive_.assign(static_cast<std::size_t>(n_), 0);
        forbid_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(b_), 0);
        domain_.assign(static_cast<std::size_t>(n_), b_);

        for (std::size_t r = 0; r < total; ++r) {
            const ILPRow& row = *rows_[r];
            partial_[r] = row.constant;
            remaining_[r] = static_cast<int>(row.terms.size());
            if (row.terms.empty()) {
                if (is_hard_[r]) {
                    if (row.constant == 0) trivially_infeasible_ = true;
                } else if (row.constant != 0) {
                    constant_objective_ += weight_[r];
                }
                continue;
            }
            int last = row.terms.front().var;
            Digit coeff = row.terms.front().coeff;
            for (const auto& t : row.terms) {
                var_rows_[static_cast<std::size_t>(t.var)].push_back(Occurrence{static_cast<int>(r), t.coeff});
                if (position_[static_cast<std::size_t>(t.var)] > position_[static_cast<std::size_t>(last)]) {
                    last = t.var;
                    coeff = t.coeff;
                }
            }
            last_var_[r] = last;
            last_coeff_[r] = coeff;
            closing_[static_cast<std::size_t>(last)].push_back(static_cast<int>(r));
            if (!is_hard_[r] && weight_[r] > 0) {
                open_positive_ += weight_[r];
                closing_positive_[static_cast<std::size_t>(last)] += weight_[r];
            }
            if (is_hard_[r] && remaining_[r] == 1) {
                if (!add_forbid(static_cast<int>(r))) trivially_infeasible_ = true;
            }
        }
        global_bound_ = constant_objective_ + open_positive_;

        std::mt19937_64 rng(options_.seed);
        preference_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(b_), 0);
        for (int v = 0; v < n_; ++v) {
            auto first = preference_.begin() + static_cast<std::ptrdiff_t>(v) * b_;
            std::iota(first, first + b_, 0);
            for (int i = b_ - 1; i > 0; --i) std::swap(first[i], first[static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1))]);
        }
    }

    int forbidden_value(int r) const {
        // partial + coeff * x == 0  =>  x = -partial / coeff.
        const PrimeBase base = model_.base;
        return gf_mul(gf_neg(static_cast<Digit>(partial_[static_cast<std::size_t>(r)]), base),
                      gf_inv(last_coeff_[static_cast<std::size_t>(r)], base), base);
    }

    /// Returns false on a domain wipeout.
    bool add_forbid(int r) {
        const int u = last_var_[static_cast<std::size_t>(r)];
        const int f = forbidden_value(r);
        auto& count = forbid_[static_cast<std::size_t>(u) * static_cast<std::size_t>(b_) + static_cast<std::size_t>(f)];
        if (count++ == 0) --domain_[static_cast<std::size_t>(u)];
        trail_.push_back({u, f});
        return domain_[static_cast<std::size_t>(u)] > 0;
    }

    void dfs(int depth) {
        if (stop_) return;
        if (depth == n_) {
            const long long objective = closed_ + constant_objective_;
            if (!have_incumbent_ || objective > best_) {
                have_incumbent_ = true;
                best_ = objective;
                best_values_ = assigned_;
                if (best_ >= global_bound_) stop_ = true;
            }
            return;
        }
        const int v = order_[static_cast<std::size_t>(depth)];
        const auto vi = static_cast<std::size_t>(v);

        // Weak gain of each value over the rows this variable closes.
        std::vector<std::pair<long long, int>> candidates;
        candidates.reserve(static_cast<std::size_t>(b_));
        for (int k = 0; k < b_; ++k) {
            const int val = preference_[vi * static_cast<std::size_t>(b_) + static_cast<std::size_t>(k)];
            if (forbid_[vi * static_cast<std::size_t>(b_) + static_cast<std::size_t>(val)] != 0) continue;
            long long gain = 0;
            for (int r : closing_[vi]) {
                if (is_hard_[static_cast<std::size_t>(r)]) continue;
                const int coeff = coeff_in_row(r, v);
                if ((partial_[static_cast<std::size_t>(r)] + coeff * val) % b_ != 0) gain += weight_[static_cast<std::size_t>(r)];
            }
            candidates.emplace_back(gain, val);
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const auto& a, const auto& c) { return a.first > c.first; });

        const long long open_after = open_positive_ - closing_positive_[vi];
        for (const auto& [gain, val] : candidates) {
            if (have_incumbent_ && closed_ + gain + open_after + constant_objective_ <= best_) break;
            // the first dive may run up to n nodes past the budget
            if (++nodes_ > options_.budget && (have_incumbent_ || nodes_ > options_.budget + static_cast<std::uint64_t>(n_))) {
                stop_ = true;
                budget_exhausted_ = true;
                return;
            }
            const std::size_t mark = trail_.size();
            bool ok = true;
            for (const auto& occ : var_rows_[vi]) {
                const auto r = static_cast<std::size_t>(occ.row);
                partial_[r] = (partial_[r] + occ.coeff * val) % b_;
                --remaining_[r];
                if (is_hard_[r] && remaining_[r] == 1 && !add_forbid(occ.row)) ok = false;
            }
            assigned_[vi] = static_cast<Digit>(val);
            const long long saved_open = open_positive_;
            closed_ += gain;
            open_positive_ = open_after;

            if (ok) dfs(depth + 1);

            closed_ -= gain;
            open_positive_ = saved_open;
            while (trail_.size() > mark) {
                const auto [u, f] = trail_.back();
                trail_.pop_back();
                auto& count = forbid_[static_cast<std::size_t>(u) * static_cast<std::size_t>(b_) + static_cast<std::size_t>(f)];
                if (--count == 0) ++domain_[static_cast<std::size_t>(u)];
            }
            for (const auto& occ : var_rows_[vi]) {
                const auto r = static_cast<std::size_t>(occ.row);
                partial_[r] = (partial_[r] + (b_ - occ.coeff) * val) % b_;
                ++remaining_[r];
            }
            if (stop_) return;
        }
    }

    int coeff_in_row(int r, int v) const {
        if (last_var_[static_cast<std::size_t>(r)] == v) return last_coeff_[static_cast<std::size_t>(r)];
        for (const auto& t : rows_[static_cast<std::size_t>(r)]->terms)
            if (t.var == v) return t.coeff;
        return 0;
    }

    void polish() {
        std::vector<int> value(rows_.size(), 0);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            long long acc = rows_[r]->constant;
            for (const auto& t : rows_[r]->terms) acc += static_cast<long long>(t.coeff) * best_values_[static_cast<std::size_t>(t.var)];
            value[r] = static_cast<int>(acc % b_);
        }
        for (int pass = 0; pass < 64; ++pass) {
            bool improved = false;
            for (int v : order_) {
                const auto vi = static_cast<std::size_t>(v);
                const int current = best_values_[vi];
                int best_val = current;
                long long best_delta = 0;
                for (int cand = 0; cand < b_; ++cand) {
                    if (cand == current) continue;
                    const int shift = (cand - current + b_) % b_;
                    long long delta = 0;
                    bool feasible = true;
                    for (const auto& occ : var_rows_[vi]) {
                        const auto r = static_cast<std::size_t>(occ.row);
                        const int next = (value[r] + occ.coeff * shift) % b_;
                        if (is_hard_[r]) {
                            if (next == 0) {
                                feasible = false;
                                break;
                            }
                        } else {
                            delta += weight_[r] * ((next != 0) - (value[r] != 0));
                        }
                    }
                    if (feasible && delta > best_delta) {
                        best_delta = delta;
                        best_val = cand;
                    }
                }
                if (best_val != current) {
                    const int shift = (best_val - current + b_) % b_;
                    for (const auto& occ : var_rows_[vi]) {
                        const auto r = static_cast<std::size_t>(occ.row);
                        value[r] = (value[r] + occ.coeff * shift) % b_;
                    }
                    best_values_[vi] = static_cast<Digit>(best_val);
                    best_ += best_delta;
                    improved = true;
                }
            }
            if (!improved) break;
        }
    }

    void finish(Assignment& out) const {
        out.values = best_values_;
        out.satisfied.assign(model_.weak.size(), false);
        Weight total{0};
        for (std::size_t i = 0; i < model_.weak.size(); ++i) {
            const ILPRow& row = model_.weak[i];
            long long acc = row.constant;
            for (const auto& t : row.terms) acc += static_cast<long long>(t.coeff) * best_values_[static_cast<std::size_t>(t.var)];
            out.satisfied[i] = acc % b_ != 0;
            if (out.satisfied[i]) total += *row.weight;
        }
        out.objective = total;
    }

    const ILPModel& model_;
    SolveOptions options_;
    int b_;
    int n_;

    std::vector<const ILPRow*> rows_;
    std::vector<long long> weight_;
    std::vector<bool> is_hard_;
    std::int64_t scale_ = 1;

    std::vector<int> order_;
    std::vector<int> position_;
    std::vector<std::vector<Occurrence>> var_rows_;
    std::vector<std::vector<int>> closing_;
    std::vector<int> last_var_;
    std::vector<Digit> last_coeff_;
    std::vector<int> partial_;
    std::vector<int> remaining_;
    std::vector<long long> closing_positive_;
    std::vector<int> forbid_;
    std::vector<int> domain_;
    std::vector<std::pair<int, int>> trail_;
    std::vector<int> preference_;
    std::vector<Digit> assigned_;

    long long constant_objective_ = 0;
    long long open_positive_ = 0;
    long long closed_ = 0;
    long long global_bound_ = 0;
    bool trivially_infeasible_ = false;

    bool have_incumbent_ = false;
    long long best_ = 0;
    std::vector<Digit> best_values_;

    std::uint64_t nodes_ = 0;
    bool stop_ = false;
    bool budget_exhausted_ = false;
};

std::string coefficient_text(const Weight& w) {
    std::string text = format_weight(w < 0 ? -w : w);
    if (text.find('/') != std::string::npos) {
        std::ostringstream os;
        os.precision(17);
        os << std::abs(boost::rational_cast<double>(w));
        text = os.str();
    }
    return text;
}

}  // namespace

SolveResult solve(const ILPModel& model, const SolveOptions& options) {
    return BranchAndBound(model, options).run();
}

std::string lp_variable_name(const UnknownSlot& slot) {
    return "x_" + std::to_string(slot.dim) + "_" + std::to_string(slot.row);
}

std::string export_lp(const ILPModel& model) {
    const int b = model.base.value();
    std::ostringstream os;
    os << "\\ netforge column model, base " << b << "\n";
    os << "Maximize\n obj:";
    for (std::size_t j = 0; j < model.weak.size(); ++j) {
        const Weight& w = *model.weak[j].weight;
        os << (j == 0 ? (w < 0 ? " -" : " ") : (w < 0 ? " - " : " + ")) << coefficient_text(w) << " nu_" << j;
    }
    os << "\nSubject To\n";

    auto linear_part = [&](const ILPRow& row, std::size_t k_index) {
        std::ostringstream lhs;
        for (const auto& t : row.terms)
            lhs << (lhs.tellp() > 0 ? " + " : "") << int{t.coeff} << " "
                << lp_variable_name(model.variables[static_cast<std::size_t>(t.var)]);
        lhs << (lhs.tellp() > 0 ? " + " : "") << b << " k_" << k_index;
        return lhs.str();
    };

    for (std::size_t i = 0; i < model.hard.size(); ++i) {
        const ILPRow& row = model.hard[i];
        const std::string lhs = linear_part(row, i);
        os << " h" << i << "_lo: " << lhs << " >= " << 1 - int{row.constant} << "\n";
        os << " h" << i << "_hi: " << lhs << " <= " << b - 1 - int{row.constant} << "\n";
    }
    for (std::size_t j = 0; j < model.weak.size(); ++j) {
        const ILPRow& row = model.weak[j];
        const std::string lhs = linear_part(row, model.hard.size() + j);
        os << " w" << j << "_lo: " << lhs << " - 1 nu_" << j << " >= " << -int{row.constant} << "\n";
        os << " w" << j << "_hi: " << lhs << " - " << b - 1 << " nu_" << j << " <= " << -int{row.constant} << "\n";
    }

    os << "Bounds\n";
    for (const auto& slot : model.variables) os << " 0 <= " << lp_variable_name(slot) << " <= " << b - 1 << "\n";
    for (std::size_t i = 0; i < model.hard.size(); ++i)
        os << " " << model.hard[i].k_lower << " <= k_" << i << " <= " << model.hard[i].k_upper << "\n";
    for (std::size_t j = 0; j < model.weak.size(); ++j)
        os << " " << model.weak[j].k_lower << " <= k_" << model.hard.size() + j << " <= " << model.weak[j].k_upper
           << "\n";
    for (std::size_t j = 0; j < model.weak.size(); ++j) os << " 0 <= nu_" << j << " <= 1\n";

    os << "General\n";
    for (const auto& slot : model.variables) os << " " << lp_variable_name(slot) << "\n";
    for (std::size_t i = 0; i < model.hard.size() + model.weak.size(); ++i) os << " k_" << i << "\n";
    os << "End\n";
    return os.str();
}

}  // namespace netforge
