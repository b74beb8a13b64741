#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "freeferm/oracle.hpp"

namespace freeferm {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parsed circuit file: modes, optional seed (used to fill 'random'
/// parameters at parse time), gate list.
struct CircuitConfig {
  Circuit circuit;
  std::optional<unsigned> seed;
};

CircuitConfig parse_circuit(std::istream& in);
CircuitConfig parse_circuit_file(const std::string& path);
std::string serialize_circuit(const CircuitConfig& config);

/// Plain-text PBM (P1) bitmap, flattened row-major.
std::vector<int> parse_pbm(std::istream& in);
std::vector<int> parse_pbm_file(const std::string& path);

/// Lines "bitstring probability"; probabilities over the full 2^k space
/// (unlisted outcomes are 0) and must sum to 1 +- 1e-6.
Vector parse_pdf(std::istream& in, int& k_bits);
Vector parse_pdf_file(const std::string& path, int& k_bits);

/// Lines "i j weight".
WeightedGraph parse_edge_list(std::istream& in);
WeightedGraph parse_edge_list_file(const std::string& path);

std::vector<int> parse_bitstring(const std::string& s);
std::string format_bits(const std::vector<int>& bits);

}  // namespace freeferm
