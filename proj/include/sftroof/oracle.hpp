#pragma once

// Brute-force reference values by enumerating every ambient word and
// evaluating Birkhoff sums on explicit eventually periodic points. Shares no
// code with the run-length dynamic program.

#include <cstddef>
#include <cstdint>
#include <functional>

#include "sftroof/roof.hpp"

namespace sftroof::oracle {

// Calls visit(w) for every ambient-admissible word of length n, in
// lexicographic order.
void for_each_ambient_word(const TransitionMatrix& ambient, std::size_t n,
                           const std::function<void(const Word&)>& visit);

std::uint64_t ambient_word_count(const TransitionMatrix& ambient, std::size_t n);

// log Z_n(scale * g) summing exp of scale * S_n g over the maximizing point of
// every cylinder.
double log_partition_sum(const RoofSpec& spec, std::size_t n, double scale);

// log Q(r) with an explicit beta: points (w_1..w_r, beta(w_r), ...).
double log_q(const RoofSpec& spec, std::size_t r, const BetaMap& beta,
             double scale = 1.0);

}  // namespace sftroof::oracle
