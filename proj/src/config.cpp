#include "freeferm/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace freeferm {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

double parse_real(const std::string& tok, int line) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a real number, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw ParseError(line, "trailing characters in number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line) {
  size_t pos = 0;
  int v;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw ParseError(line, "trailing characters in integer '" + tok + "'");
  return v;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open file: " + path);
  return in;
}

class RandomFill {
 public:
  explicit RandomFill(std::optional<unsigned> seed) : seed_(seed) {}

  double next(int line) {
    if (!seed_)
      throw ParseError(line, "'random' parameters require a seed directive");
    if (!rng_) rng_.emplace(*seed_);
    return unif_(*rng_);
  }

 private:
  std::optional<unsigned> seed_;
  std::optional<std::mt19937> rng_;
  std::uniform_real_distribution<double> unif_{0.0, M_PI};
};

}  // namespace

std::vector<int> parse_bitstring(const std::string& s) {
  std::vector<int> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bitstring must contain only 0/1: " + s);
    bits.push_back(c - '0');
  }
  return bits;
}

std::string format_bits(const std::vector<int>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

CircuitConfig parse_circuit(std::istream& in) {
  CircuitConfig config;
  config.circuit.n_modes = -1;
  std::optional<RandomFill> fill;
  std::string line;
  int line_no = 0;
  bool in_dense = false;
  GateSpec dense;

  auto read_params = [&](const std::vector<std::string>& tokens, size_t from,
                         size_t count) {
    std::vector<double> params;
    if (tokens.size() == from + 1 && tokens[from] == "random") {
      if (!fill) fill.emplace(config.seed);
      for (size_t q = 0; q < count; ++q) params.push_back(fill->next(line_no));
      return params;
    }
    if (tokens.size() != from + count)
      throw ParseError(line_no, "expected " + std::to_string(count) +
                                    " parameters or 'random'");
    for (size_t q = 0; q < count; ++q)
      params.push_back(parse_real(tokens[from + q], line_no));
    return params;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];

    if (key == "modes") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: modes N");
      if (config.circuit.n_modes >= 0)
        throw ParseError(line_no, "duplicate modes directive");
      config.circuit.n_modes = parse_int(tokens[1], line_no);
      if (config.circuit.n_modes <= 0)
        throw ParseError(line_no, "modes must be positive");
    } else if (key == "seed") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: seed S");
      config.seed = static_cast<unsigned>(parse_int(tokens[1], line_no));
    } else if (key == "gate") {
      if (in_dense) throw ParseError(line_no, "gate inside dense block");
      if (tokens.size() < 5)
        throw ParseError(line_no, "usage: gate <preserving|general> i j t params...");
      GateSpec g;
      if (tokens[1] == "preserving")
        g.kind = GateKind::Preserving;
      else if (tokens[1] == "general")
        g.kind = GateKind::General;
      else
        throw ParseError(line_no, "unknown gate kind '" + tokens[1] + "'");
      g.i = parse_int(tokens[2], line_no);
      g.j = parse_int(tokens[3], line_no);
      g.time = parse_real(tokens[4], line_no);
      g.params = read_params(tokens, 5, g.kind == GateKind::Preserving ? 4 : 6);
      config.circuit.gates.push_back(std::move(g));
    } else if (key == "dense") {
      if (in_dense) throw ParseError(line_no, "nested dense block");
      if (tokens.size() != 2) throw ParseError(line_no, "usage: dense t");
      dense = GateSpec{};
      dense.kind = GateKind::DenseLayer;
      dense.time = parse_real(tokens[1], line_no);
      in_dense = true;
    } else if (key == "block") {
      if (!in_dense) throw ParseError(line_no, "block outside dense block");
      if (tokens.size() < 4)
        throw ParseError(line_no, "usage: block i j params...");
      PairBlock blk;
      blk.i = parse_int(tokens[1], line_no);
      blk.j = parse_int(tokens[2], line_no);
      const auto params = read_params(tokens, 3, 6);
      std::copy(params.begin(), params.end(), blk.params.begin());
      dense.blocks.push_back(blk);
    } else if (key == "end") {
      if (!in_dense) throw ParseError(line_no, "end outside dense block");
      if (tokens.size() != 1) throw ParseError(line_no, "usage: end");
      config.circuit.gates.push_back(std::move(dense));
      in_dense = false;
    } else {
      throw ParseError(line_no, "unknown directive '" + key + "'");
    }
  }
  if (in_dense) throw ParseError(line_no, "unterminated dense block");
  if (config.circuit.n_modes < 0)
    throw ParseError(line_no, "missing modes directive");
  for (const auto& g : config.circuit.gates) {
    try {
      validate_gate(g, config.circuit.n_modes);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return config;
}

CircuitConfig parse_circuit_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_circuit(in);
}

std::string serialize_circuit(const CircuitConfig& config) {
  std::ostringstream out;
  out.precision(17);
  out << "modes " << config.circuit.n_modes << "\n";
  if (config.seed) out << "seed " << *config.seed << "\n";
  for (const auto& g : config.circuit.gates) {
    if (g.kind == GateKind::DenseLayer) {
      out << "dense " << g.time << "\n";
      for (const auto& blk : g.blocks) {
        out << "block " << blk.i << " " << blk.j;
        for (double p : blk.params) out << " " << p;
        out << "\n";
      }
      out << "end\n";
    } else {
      out << "gate "
          << (g.kind == GateKind::Preserving ? "preserving" : "general") << " "
          << g.i << " " << g.j << " " << g.time;
      for (double p : g.params) out << " " << p;
      out << "\n";
    }
  }
  return out.str();
}

std::vector<int> parse_pbm(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool have_magic = false;
  int width = -1, height = -1;
  std::vector<int> bits;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    for (const auto& tok : tokens) {
      if (!have_magic) {
        if (tok != "P1") throw ParseError(line_no, "expected PBM magic 'P1'");
        have_magic = true;
      } else if (width < 0) {
        width = parse_int(tok, line_no);
      } else if (height < 0) {
        height = parse_int(tok, line_no);
      } else {
        for (char c : tok) {
          if (c != '0' && c != '1')
            throw ParseError(line_no, "PBM pixels must be 0/1");
          bits.push_back(c - '0');
        }
      }
    }
  }
  if (!have_magic || width <= 0 || height <= 0)
    throw ParseError(line_no, "incomplete PBM header");
  if (static_cast<int>(bits.size()) != width * height)
    throw ParseError(line_no, "PBM pixel count mismatch");
  return bits;
}

std::vector<int> parse_pbm_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_pbm(in);
}

Vector parse_pdf(std::istream& in, int& k_bits) {
  std::string line;
  int line_no = 0;
  k_bits = -1;
  std::vector<std::pair<size_t, double>> entries;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2)
      throw ParseError(line_no, "usage: <bitstring> <probability>");
    std::vector<int> bits;
    try {
      bits = parse_bitstring(tokens[0]);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (k_bits < 0) k_bits = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != k_bits)
      throw ParseError(line_no, "inconsistent bitstring length");
    const double p = parse_real(tokens[1], line_no);
    if (p < 0.0) throw ParseError(line_no, "probability must be non-negative");
    entries.emplace_back(basis_index(bits), p);
  }
  if (k_bits < 0) throw ParseError(line_no, "empty pdf file");
  if (k_bits > 20) throw ParseError(line_no, "pdf bitstrings too long");
  Vector pdf = Vector::Zero(Eigen::Index{1} << k_bits);
  for (const auto& [idx, p] : entries) pdf[static_cast<Eigen::Index>(idx)] += p;
  if (std::abs(pdf.sum() - 1.0) > 1e-6)
    throw ParseError(line_no, "pdf must sum to 1 within 1e-6");
  return pdf;
}

Vector parse_pdf_file(const std::string& path, int& k_bits) {
  auto in = open_or_throw(path);
  return parse_pdf(in, k_bits);
}

WeightedGraph parse_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  WeightedGraph g;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 3) throw ParseError(line_no, "usage: i j weight");
    const int i = parse_int(tokens[0], line_no);
    const int j = parse_int(tokens[1], line_no);
    const double w = parse_real(tokens[2], line_no);
    g.edges.emplace_back(i, j, w);
    g.n_nodes = std::max({g.n_nodes, i + 1, j + 1});
  }
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw ParseError(line_no, e.what());
  }
  return g;
}

WeightedGraph parse_edge_list_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_edge_list(in);
}

}  // namespace freeferm
