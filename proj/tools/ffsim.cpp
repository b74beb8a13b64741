#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>

#include <CLI11.hpp>

#include "freeferm/config.hpp"
#include "freeferm/optimize.hpp"

namespace {

using namespace freeferm;

constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;
constexpr int kExitOracleCeiling = 4;
constexpr int kExitNumeric = 5;

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> require_bits(const std::string& s, size_t expect,
                              const std::string& name) {
  auto bits = parse_bitstring(s);
  if (bits.size() != expect)
    throw DimensionError(name + " must have length " + std::to_string(expect) +
                         ", got " + std::to_string(bits.size()));
  return bits;
}

std::vector<int> alternating_input(int n) {
  std::vector<int> x(n);
  for (int i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? 1 : 0;
  return x;
}

Circuit nn_layer_circuit(int n, int layers, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, M_PI);
  Circuit circuit;
  circuit.n_modes = n;
  for (int l = 0; l < layers; ++l)
    for (int i = 0; i + 1 < n; ++i)
      circuit.gates.push_back(GateSpec::preserving(
          i, i + 1, {unif(rng), unif(rng), unif(rng), unif(rng)}));
  return circuit;
}

int cmd_prob(const std::string& circuit_file, const std::string& x_str,
             const std::string& y_str, std::string mask_str, bool serial) {
  const CircuitConfig config = parse_circuit_file(circuit_file);
  const int n = config.circuit.n_modes;
  if (mask_str.empty()) mask_str = std::string(n, '1');
  MeasurementQuery q;
  q.x = require_bits(x_str, n, "--x");
  q.mask = require_bits(mask_str, n, "--mask");
  const size_t k = std::accumulate(q.mask.begin(), q.mask.end(), size_t{0});
  q.y = require_bits(y_str, k, "--y");
  (void)serial;
  const double p = probability(config.circuit, q);
  std::cout << std::setprecision(14) << p << "\n";
  return 0;
}

int cmd_compare(const std::string& circuit_file, const std::string& x_str,
                bool serial) {
  const CircuitConfig config = parse_circuit_file(circuit_file);
  const int n = config.circuit.n_modes;
  if (n > kOracleMaxQubits) {
    std::cerr << "compare requires N <= " << kOracleMaxQubits << "\n";
    return kExitOracleCeiling;
  }
  const std::vector<int> x = require_bits(x_str, n, "--x");
  const std::vector<int> mask(n, 1);

  std::vector<MeasurementQuery> queries;
  for (auto& y : full_support(n)) queries.push_back({x, mask, y});
  const auto fermion = probability_batch(config.circuit, queries, !serial);

  const CVector psi = evolve_statevector(config.circuit, x);
  double tv = 0.0;
  std::cout << std::setprecision(14);
  std::cout << "y\tp_fermion\tp_exact\n";
  for (size_t i = 0; i < queries.size(); ++i) {
    const double exact = std::norm(psi[i]);
    tv += std::abs(fermion[i] - exact);
    std::cout << format_bits(queries[i].y) << "\t" << fermion[i] << "\t"
              << exact << "\n";
  }
  std::cout << "total_variation\t" << tv << "\n";
  return tv < 1e-9 ? 0 : 1;
}

int cmd_bench(const std::vector<int>& n_list, int layers, int reps,
              const std::string& out_csv, bool serial) {
  std::ofstream out(out_csv);
  if (!out) {
    std::cerr << "cannot write " << out_csv << "\n";
    return 1;
  }
  out << "n_qubits,n_layers,wall_seconds_mean,wall_seconds_std,repetitions\n";
  for (int n : n_list) {
    if (n % 2 != 0) throw DimensionError("bench requires even N");
    std::vector<double> seconds;
    for (int rep = 0; rep < reps; ++rep) {
      const Circuit circuit =
          nn_layer_circuit(n, layers, 1000003u * static_cast<unsigned>(n) + rep);
      MeasurementQuery q;
      q.x = alternating_input(n);
      q.mask.assign(n, 1);
      q.y = q.x;
      const auto t0 = std::chrono::steady_clock::now();
      const double p = probability(circuit, q);
      const auto t1 = std::chrono::steady_clock::now();
      (void)p;
      seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    const double mean =
        std::accumulate(seconds.begin(), seconds.end(), 0.0) / seconds.size();
    double var = 0.0;
    for (double s : seconds) var += (s - mean) * (s - mean);
    const double stddev = std::sqrt(var / seconds.size());
    out << n << "," << layers << "," << std::setprecision(9) << mean << ","
        << stddev << "," << reps << "\n";
    out.flush();
    std::cout << "N=" << n << " mean=" << mean << "s\n";
  }
  (void)serial;
  return 0;
}

int cmd_train(const std::string& task, const std::string& input_file,
              const std::string& circuit_file, int iters, double lr,
              unsigned seed, const std::string& out_csv,
              const std::string& out_circuit, bool serial) {
  const CircuitConfig config = parse_circuit_file(circuit_file);
  const int n = config.circuit.n_modes;

  Objective obj;
  if (task == "memorize") {
    const std::vector<int> pattern = parse_pbm_file(input_file);
    if (static_cast<int>(pattern.size()) != n)
      throw DimensionError("pattern size must equal circuit modes");
    obj = Objective::neg_prob(pattern, std::vector<int>(n, 1), pattern);
  } else if (task == "born") {
    int k = 0;
    Vector pdf = parse_pdf_file(input_file, k);
    if (k > n) throw DimensionError("pdf bitstrings longer than circuit");
    std::vector<int> mask(n, 0);
    for (int i = 0; i < k; ++i) mask[i] = 1;
    obj = Objective::mmd(alternating_input(n), mask, std::move(pdf),
                         RbfMixtureKernel::build(k, {0.5, 1.0, 2.0, 4.0}));
  } else if (task == "maxcut") {
    WeightedGraph graph = parse_edge_list_file(input_file);
    if (graph.n_nodes > n) throw DimensionError("graph larger than circuit");
    std::vector<int> mask(n, 0);
    for (int i = 0; i < graph.n_nodes; ++i) mask[i] = 1;
    obj = Objective::maxcut(alternating_input(n), mask, std::move(graph));
  } else {
    std::cerr << "unknown task '" << task << "'\n";
    return kExitParse;
  }

  std::ofstream out(out_csv);
  if (!out) {
    std::cerr << "cannot write " << out_csv << "\n";
    return 1;
  }
  out << "iteration,loss\n";
  out << std::setprecision(17);

  TrainOptions opts;
  opts.iters = iters;
  opts.lr = lr;
  opts.seed = seed;
  opts.beta1 = 0.9;
  opts.parallel = !serial;
  opts.on_iteration = [&](int it, double loss) {
    out << it << "," << loss << "\n";
  };
  TrainResult result = train(obj, config.circuit, opts);

  CircuitConfig trained{result.circuit, seed};
  std::ofstream cfg_out(out_circuit);
  cfg_out << serialize_circuit(trained);

  std::cout << std::setprecision(14);
  const double final_loss = result.loss_trace.back();
  if (task == "memorize") {
    std::cout << "final_probability\t" << -final_loss << "\n";
  } else if (task == "born") {
    std::cout << "final_mmd\t" << final_loss << "\n";
  } else {
    std::vector<MeasurementQuery> queries;
    for (auto& y : obj.support) queries.push_back({obj.x, obj.mask, y});
    const auto probs = probability_batch(result.circuit, queries, !serial);
    const size_t best =
        std::max_element(probs.begin(), probs.end()) - probs.begin();
    std::cout << "final_expected_cut\t" << -final_loss << "\n";
    std::cout << "argmax_bitstring\t" << format_bits(obj.support[best]) << "\n";
    std::cout << "argmax_cut\t" << obj.graph.cut_value(obj.support[best]) << "\n";
  }
  return 0;
}

int cmd_pauli(const std::string& circuit_file) {
  const CircuitConfig config = parse_circuit_file(circuit_file);
  std::vector<PauliTerm> terms;
  for (const auto& gate : config.circuit.gates) {
    auto t = pauli_decompose(gate, config.circuit.n_modes);
    terms.insert(terms.end(), t.begin(), t.end());
  }
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.ops < b.ops; });
  std::cout << std::setprecision(14);
  for (const auto& t : terms)
    std::cout << t.coefficient << "\t" << t.ops << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free-fermion circuit simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  bool serial = false;
  app.add_flag("--serial", serial, "single-threaded, bit-reproducible runs");

  std::string circuit_file, x_str, y_str, mask_str;
  auto* prob = app.add_subcommand("prob", "measurement probability p(y|x)");
  prob->add_option("--circuit", circuit_file)->required();
  prob->add_option("--x", x_str)->required();
  prob->add_option("--y", y_str);
  prob->add_option("--mask", mask_str);

  auto* compare =
      app.add_subcommand("compare", "full distribution vs exact diagonalization");
  compare->add_option("--circuit", circuit_file)->required();
  compare->add_option("--x", x_str)->required();

  std::vector<int> n_list;
  int layers = 1, reps = 3;
  std::string out_path = "bench.csv";
  auto* bench = app.add_subcommand("bench", "runtime scaling benchmark");
  bench->add_option("--n", n_list, "qubit counts")->required();
  bench->add_option("--layers", layers);
  bench->add_option("--reps", reps);
  bench->add_option("--out", out_path);

  std::string task, input_file, out_circuit;
  int iters = 100;
  double lr = 0.1;
  unsigned seed = 0;
  auto* train_cmd = app.add_subcommand("train", "optimize circuit parameters");
  train_cmd->add_option("--task", task, "memorize|born|maxcut")->required();
  train_cmd->add_option("--input", input_file)->required();
  train_cmd->add_option("--circuit", circuit_file)->required();
  train_cmd->add_option("--iters", iters);
  train_cmd->add_option("--lr", lr);
  train_cmd->add_option("--seed", seed);
  train_cmd->add_option("--out", out_path);
  train_cmd->add_option("--out-circuit", out_circuit);

  auto* pauli = app.add_subcommand("pauli", "Pauli-string export");
  pauli->add_option("--circuit", circuit_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (prob->parsed()) return cmd_prob(circuit_file, x_str, y_str, mask_str, serial);
    if (compare->parsed()) return cmd_compare(circuit_file, x_str, serial);
    if (bench->parsed()) return cmd_bench(n_list, layers, reps, out_path, serial);
    if (train_cmd->parsed()) {
      if (out_circuit.empty()) out_circuit = out_path + ".circuit";
      return cmd_train(task, input_file, circuit_file, iters, lr, seed,
                       out_path, out_circuit, serial);
    }
    if (pauli->parsed()) return cmd_pauli(circuit_file);
  } catch (const freeferm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const freeferm::ImaginaryResidual& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const std::runtime_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 1;
}
