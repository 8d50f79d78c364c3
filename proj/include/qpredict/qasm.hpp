// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/circuit.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace qpredict {

/// Parses the OpenQASM 2.0 subset: register declarations, standard-header
/// gates (with register broadcast), measure, barrier, and constant angle
/// expressions. Registers are flattened to global indices in declaration
/// order. Throws ParseError or UnsupportedError.
Circuit parse_qasm(std::string_view source);

Circuit load_qasm(const std::filesystem::path& path);

/// Normalized OpenQASM 2.0: one statement per line, registers `q` and `c`,
/// angles printed with round-trip precision.
std::string to_qasm(const Circuit& circuit);

void save_qasm(const Circuit& circuit, const std::filesystem::path& path);

}  // namespace qpredict
