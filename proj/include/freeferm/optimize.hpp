#pragma once

#include <functional>
#include <optional>

#include "freeferm/oracle.hpp"

namespace freeferm {

/// Flat view of all gate parameters of a circuit, gate order then per-gate
/// parameter order.
Vector read_parameters(const Circuit& circuit);
void write_parameters(Circuit& circuit, const Vector& params);

/// Sum-of-RBF kernel over outcome bit vectors, K(u,v) = sum_s exp(-|u-v|^2/(2s)).
struct RbfMixtureKernel {
  std::vector<double> sigma_list;
  Matrix gram;  // 2^k x 2^k over the outcome support

  static RbfMixtureKernel build(int k_bits, std::vector<double> sigmas);
};

enum class ObjectiveKind { NegProb, Mmd, MaxcutExpectation };

/// Loss over circuit measurement probabilities. The support lists the
/// outcome bitstrings that get enumerated; for Mmd it must be the full 2^k
/// outcome space of the measured subsystem.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::NegProb;
  std::vector<int> x;     // input bits (length N)
  std::vector<int> mask;  // measured qubits (length N)
  std::vector<std::vector<int>> support;  // outcome bitstrings (length k each)

  // NegProb
  std::vector<int> target_y;
  // Mmd
  Vector target_pdf;
  RbfMixtureKernel kernel;
  // MaxcutExpectation
  WeightedGraph graph;

  static Objective neg_prob(std::vector<int> x, std::vector<int> mask,
                            std::vector<int> y);
  static Objective mmd(std::vector<int> x, std::vector<int> mask,
                       Vector target_pdf, RbfMixtureKernel kernel);
  static Objective maxcut(std::vector<int> x, std::vector<int> mask,
                          WeightedGraph graph);

  void validate(int n_modes) const;
};

/// Full 2^k outcome enumeration, ascending binary order.
std::vector<std::vector<int>> full_support(int k_bits);

double evaluate(const Objective& obj, const Circuit& circuit,
                bool parallel = true);

/// Central finite differences, 2P objective evaluations.
Vector gradient_fd(const Objective& obj, const Circuit& circuit,
                   double step = 1e-5, bool parallel = true);

struct AdamState {
  double lr = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step_count = 0;
  Vector m;
  Vector v;

  static AdamState init(int n_params, double lr, double beta1 = 0.9,
                        double beta2 = 0.999);
};

Vector adam_step(AdamState& state, const Vector& params, const Vector& grad);

struct TrainResult {
  Circuit circuit;
  std::vector<double> loss_trace;
};

struct TrainOptions {
  int iters = 100;
  double lr = 0.1;
  unsigned seed = 0;
  double beta1 = 0.9;
  double fd_step = 1e-5;
  bool parallel = true;
  bool randomize_init = true;  // uniform [0, pi) parameter fill from seed
  std::function<void(int, double)> on_iteration;
};

TrainResult train(const Objective& obj, Circuit circuit, const TrainOptions& opts);

}  // namespace freeferm
