// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/circuit.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qpredict {

/// ghz, wstate, dj, qft, grover, qaoa, random.
const std::vector<std::string>& corpus_families();

struct CorpusSpec {
  std::vector<std::string> families = corpus_families();
  int min_qubits = 2;
  int max_qubits = 130;
  std::uint64_t seed = 0;
  int random_variants = 10;  ///< circuits per size for `random`
  int qaoa_variants = 3;     ///< graph shapes per size for `qaoa`
};

/// Whether `family` has an instance on `n` qubits. Grover uses n = 2, 3
/// and even n up to 14 (data qubits plus a V-chain of ancillas).
bool family_supports(const std::string& family, int n);

/// Number of variants of `family` generated per size.
int family_variants(const std::string& family, const CorpusSpec& spec);

/// One instance; throws Error for an unknown family or unsupported size.
Circuit generate_circuit(const std::string& family, int n, int variant, std::uint64_t seed);

/// Family-major sweep over the qubit range, variants innermost.
std::vector<Circuit> generate_corpus(const CorpusSpec& spec);

}  // namespace qpredict
