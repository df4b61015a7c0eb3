#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sptetris/scalar.hpp"

namespace sptetris {

struct SearchRequest {
    std::vector<Rational> norms_sq;
    std::vector<Rational> eigenvalues;
    std::size_t max_results = 1;
    /// Node limit for the exhaustive phase: one node per eigenvalue ordering
    /// plus one per placed norm.
    std::uint64_t budget = 10'000'000;
    /// Keep the given order of one side and permute only the other.
    bool fix_norm_order = false;
    bool fix_eigenvalue_order = false;
    unsigned threads = 1;
};

struct Ordering {
    std::vector<Rational> norms_sq;
    std::vector<Rational> eigenvalues;

    friend bool operator==(const Ordering &, const Ordering &) = default;
};

/// Lexicographic on (eigenvalues, norms_sq).
bool operator<(const Ordering & a, const Ordering & b);

struct SearchResult {
    std::vector<Ordering> orderings; // sorted, every entry passes check_ready
    bool exhausted = false;          // every distinct ordering pair was decided
    bool budget_exhausted = false;   // stopped by the node budget
    std::uint64_t nodes = 0;
};

/// Tries a few monotone heuristic orders, then walks the distinct
/// permutations of both multisets with prefix pruning. Throws TraceMismatch.
SearchResult find_ready_orderings(const SearchRequest & request);

enum class OrderingVerdict { Ready, NotReady, Indeterminate };

std::string_view to_string(OrderingVerdict v);

/// Indeterminate when the budget runs out before an answer is known.
OrderingVerdict is_any_ordering_ready(SearchRequest request);

} // namespace sptetris
