#include "sptetris/search.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <thread>

#include "sptetris/readiness.hpp"

namespace sptetris {

bool operator<(const Ordering & a, const Ordering & b)
{
    if (a.eigenvalues != b.eigenvalues)
        return std::lexicographical_compare(a.eigenvalues.begin(), a.eigenvalues.end(), b.eigenvalues.begin(),
                                            b.eigenvalues.end());
    return std::lexicographical_compare(a.norms_sq.begin(), a.norms_sq.end(), b.norms_sq.begin(), b.norms_sq.end());
}

std::string_view to_string(OrderingVerdict v)
{
    switch (v) {
    case OrderingVerdict::Ready: return "Ready";
    case OrderingVerdict::NotReady: return "NotReady";
    case OrderingVerdict::Indeterminate: return "Indeterminate";
    }
    return "Unknown";
}

namespace {

bool is_ready(const std::vector<Rational> & eigenvalues, const std::vector<Rational> & norms_sq)
{
    return check_ready(FrameSpec(eigenvalues, norms_sq)).ready;
}

enum class TaskStatus { Complete, MaxHits, Cap };

struct TaskOutcome {
    struct Hit {
        std::uint64_t node; // local node count when the leaf was reached
        std::vector<Rational> norms_sq;
    };
    std::vector<Hit> hits;
    std::uint64_t nodes = 0;
    TaskStatus status = TaskStatus::Complete;
};

// Depth-first walk over the distinct orderings of the norms for one fixed
// eigenvalue ordering. A prefix is dropped as soon as some row k whose cut
// m_k is already determined violates the readiness conditions.
class NormWalker {
  public:
    NormWalker(const std::vector<Rational> & eigenvalues, const std::vector<Rational> & norms_sq, bool fixed,
               std::uint64_t cap, std::size_t max_hits)
        : eigenvalues_(eigenvalues), fixed_norms_(norms_sq), fixed_(fixed), cap_(cap), max_hits_(max_hits),
          m_(norms_sq.size())
    {
        eig_cum_.push_back(Rational(0));
        for (const auto & v : eigenvalues)
            eig_cum_.push_back(eig_cum_.back() + v);

        std::vector<Rational> sorted = norms_sq;
        std::sort(sorted.begin(), sorted.end());
        for (const auto & v : sorted) {
            if (values_.empty() || values_.back() != v) {
                values_.push_back(v);
                counts_.push_back(0);
            }
            ++counts_.back();
        }
        order_.reserve(m_);
        cum_.reserve(m_ + 1);
        cum_.push_back(Rational(0));
    }

    TaskOutcome run()
    {
        walk();
        return std::move(out_);
    }

  private:
    // false aborts the whole walk
    bool walk()
    {
        const std::size_t p = order_.size();
        if (p == m_) {
            if (is_ready(eigenvalues_, order_)) {
                out_.hits.push_back({out_.nodes, order_});
                if (out_.hits.size() >= max_hits_) {
                    out_.status = TaskStatus::MaxHits;
                    return false;
                }
            }
            return true;
        }

        if (fixed_)
            return try_place(fixed_norms_[p], std::nullopt);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (counts_[i] == 0)
                continue;
            if (!try_place(values_[i], i))
                return false;
        }
        return true;
    }

    bool try_place(const Rational & value, std::optional<std::size_t> slot)
    {
        if (out_.nodes >= cap_) {
            out_.status = TaskStatus::Cap;
            return false;
        }
        ++out_.nodes;

        order_.push_back(value);
        cum_.push_back(cum_.back() + value);
        if (slot)
            --counts_[*slot];
        bool keep_going = true;
        if (prefix_ok())
            keep_going = walk();
        if (slot)
            ++counts_[*slot];
        cum_.pop_back();
        order_.pop_back();
        return keep_going;
    }

    [[nodiscard]] bool prefix_ok() const
    {
        const std::size_t p = order_.size();
        const std::size_t n = eigenvalues_.size();
        std::size_t j = 0;
        for (std::size_t k = 1; k < n; ++k) {
            const Rational & target = eig_cum_[k];
            if (cum_[p] <= target)
                return true; // m_k and every later cut still open
            while (j + 1 < p && cum_[j + 1] <= target)
                ++j;
            const std::size_t mk = j;
            const Rational deficit = target - cum_[mk];
            if (deficit.is_zero())
                continue;
            if (mk + 2 > m_)
                return false;
            const bool has_next_row_cut = k + 1 < n;
            if (mk + 2 <= p) {
                if (order_[mk + 1] < deficit)
                    return false;
                if (has_next_row_cut && cum_[mk + 2] > eig_cum_[k + 1])
                    return false;
            } else if (has_next_row_cut && cum_[mk + 1] >= eig_cum_[k + 1]) {
                return false;
            }
        }
        return true;
    }

    const std::vector<Rational> & eigenvalues_;
    const std::vector<Rational> & fixed_norms_;
    bool fixed_;
    std::uint64_t cap_;
    std::size_t max_hits_;
    std::size_t m_;

    std::vector<Rational> eig_cum_;
    std::vector<Rational> values_;
    std::vector<std::size_t> counts_;
    std::vector<Rational> order_;
    std::vector<Rational> cum_;
    TaskOutcome out_;
};

std::vector<Ordering> heuristic_orders(const SearchRequest & req)
{
    auto arrange = [](std::vector<Rational> v, bool fixed, bool increasing) {
        if (!fixed) {
            if (increasing)
                std::sort(v.begin(), v.end());
            else
                std::sort(v.begin(), v.end(), std::greater<>{});
        }
        return v;
    };
    std::vector<Ordering> out;
    for (auto [norms_inc, eig_inc] : {std::pair{false, true}, std::pair{false, false}, std::pair{true, true}}) {
        Ordering o{arrange(req.norms_sq, req.fix_norm_order, norms_inc),
                   arrange(req.eigenvalues, req.fix_eigenvalue_order, eig_inc)};
        if (std::find(out.begin(), out.end(), o) == out.end())
            out.push_back(std::move(o));
    }
    return out;
}

} // namespace

SearchResult find_ready_orderings(const SearchRequest & req)
{
    if (req.norms_sq.empty() || req.eigenvalues.empty())
        throw Error(ErrorKind::InvalidArgument, "search needs norms and eigenvalues");
    if (sum(req.norms_sq) != sum(req.eigenvalues))
        throw Error(ErrorKind::TraceMismatch, "squared norms sum to " + sum(req.norms_sq).to_string()
                                                  + " but eigenvalues sum to " + sum(req.eigenvalues).to_string());
    // validates positivity
    (void)FrameSpec(req.eigenvalues, req.norms_sq);

    SearchResult result;
    std::vector<Ordering> found;
    auto finish = [&] {
        std::sort(found.begin(), found.end());
        result.orderings = std::move(found);
        return result;
    };
    if (req.max_results == 0)
        return finish();

    for (auto & o : heuristic_orders(req))
        if (is_ready(o.eigenvalues, o.norms_sq) && found.size() < req.max_results)
            found.push_back(std::move(o));
    if (found.size() >= req.max_results)
        return finish();
    const std::size_t heuristic_hits = found.size();

    std::vector<Rational> eig_order = req.eigenvalues;
    if (!req.fix_eigenvalue_order)
        std::sort(eig_order.begin(), eig_order.end());
    bool more_orders = true;
    auto next_eig_order = [&]() -> std::optional<std::vector<Rational>> {
        if (!more_orders)
            return std::nullopt;
        std::vector<Rational> current = eig_order;
        more_orders = !req.fix_eigenvalue_order && std::next_permutation(eig_order.begin(), eig_order.end());
        return current;
    };

    const unsigned threads = std::max(1u, req.threads);
    const std::size_t batch_size = threads == 1 ? 1 : threads * 8;
    std::uint64_t nodes = 0;

    for (;;) {
        std::vector<std::vector<Rational>> batch;
        while (batch.size() < batch_size)
            if (auto o = next_eig_order())
                batch.push_back(std::move(*o));
            else
                break;
        if (batch.empty()) {
            result.exhausted = true;
            break;
        }

        // Tasks run with the budget left at batch start; the merge below
        // replays them in order against the true budget, which makes the
        // outcome independent of the thread count.
        const std::uint64_t cap = req.budget > nodes ? req.budget - nodes : 0;
        const std::size_t max_hits = req.max_results + heuristic_hits;
        std::vector<TaskOutcome> outcomes(batch.size());
        auto run_task = [&](std::size_t i) {
            outcomes[i] = NormWalker(batch[i], req.norms_sq, req.fix_norm_order, cap, max_hits).run();
        };
        if (threads == 1 || batch.size() == 1) {
            for (std::size_t i = 0; i < batch.size(); ++i)
                run_task(i);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < std::min<std::size_t>(threads, batch.size()); ++t)
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < batch.size(); i = next++)
                        run_task(i);
                });
            for (auto & th : pool)
                th.join();
        }

        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (nodes >= req.budget) {
                result.budget_exhausted = true;
                result.nodes = nodes;
                return finish();
            }
            ++nodes;
            const TaskOutcome & task = outcomes[i];
            for (const auto & hit : task.hits) {
                if (nodes + hit.node > req.budget)
                    break;
                Ordering o{hit.norms_sq, batch[i]};
                if (std::find(found.begin(), found.end(), o) != found.end())
                    continue;
                found.push_back(std::move(o));
                if (found.size() >= req.max_results) {
                    result.nodes = nodes + hit.node;
                    return finish();
                }
            }
            if (task.status == TaskStatus::Cap || nodes + task.nodes > req.budget) {
                result.budget_exhausted = true;
                result.nodes = req.budget;
                return finish();
            }
            nodes += task.nodes;
        }
    }
    result.nodes = nodes;
    return finish();
}

OrderingVerdict is_any_ordering_ready(SearchRequest request)
{
    request.max_results = 1;
    const SearchResult r = find_ready_orderings(request);
    if (!r.orderings.empty())
        return OrderingVerdict::Ready;
    return r.exhausted ? OrderingVerdict::NotReady : OrderingVerdict::Indeterminate;
}

} // namespace sptetris
