#include "freeferm/optimize.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

namespace freeferm {

namespace {

void parallel_for(size_t n, bool parallel, const std::function<void(size_t)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const size_t n_threads = parallel ? std::min<size_t>(n, hw ? hw : 1) : 1;
  if (n_threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const size_t chunk = (n + n_threads - 1) / n_threads;
  for (size_t w = 0; w < n_threads; ++w) {
    const size_t begin = w * chunk;
    const size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, begin, end] {
      try {
        for (size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : workers) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

Vector read_parameters(const Circuit& circuit) {
  std::vector<double> flat;
  for (const auto& g : circuit.gates) {
    if (g.kind == GateKind::DenseLayer) {
      for (const auto& blk : g.blocks)
        flat.insert(flat.end(), blk.params.begin(), blk.params.end());
    } else {
      flat.insert(flat.end(), g.params.begin(), g.params.end());
    }
  }
  return Eigen::Map<const Vector>(flat.data(), flat.size());
}

void write_parameters(Circuit& circuit, const Vector& params) {
  if (params.size() != circuit.param_count())
    throw std::invalid_argument("parameter vector length mismatch");
  Eigen::Index pos = 0;
  for (auto& g : circuit.gates) {
    if (g.kind == GateKind::DenseLayer) {
      for (auto& blk : g.blocks)
        for (double& p : blk.params) p = params[pos++];
    } else {
      for (double& p : g.params) p = params[pos++];
    }
  }
}

RbfMixtureKernel RbfMixtureKernel::build(int k_bits, std::vector<double> sigmas) {
  for (double s : sigmas)
    if (!(s > 0.0)) throw std::invalid_argument("kernel sigma must be positive");
  const size_t dim = size_t{1} << k_bits;
  RbfMixtureKernel kernel;
  kernel.sigma_list = std::move(sigmas);
  kernel.gram = Matrix(dim, dim);
  for (size_t u = 0; u < dim; ++u)
    for (size_t v = u; v < dim; ++v) {
      const double dist2 = static_cast<double>(std::popcount(u ^ v));
      double val = 0.0;
      for (double s : kernel.sigma_list) val += std::exp(-dist2 / (2.0 * s));
      kernel.gram(u, v) = val;
      kernel.gram(v, u) = val;
    }
  return kernel;
}

std::vector<std::vector<int>> full_support(int k_bits) {
  const size_t total = size_t{1} << k_bits;
  std::vector<std::vector<int>> support(total, std::vector<int>(k_bits));
  for (size_t idx = 0; idx < total; ++idx)
    for (int b = 0; b < k_bits; ++b)
      support[idx][b] = static_cast<int>((idx >> (k_bits - 1 - b)) & 1u);
  return support;
}

Objective Objective::neg_prob(std::vector<int> x, std::vector<int> mask,
                              std::vector<int> y) {
  Objective obj;
  obj.kind = ObjectiveKind::NegProb;
  obj.x = std::move(x);
  obj.mask = std::move(mask);
  obj.target_y = std::move(y);
  obj.support = {obj.target_y};
  return obj;
}

Objective Objective::mmd(std::vector<int> x, std::vector<int> mask,
                         Vector target_pdf, RbfMixtureKernel kernel) {
  Objective obj;
  obj.kind = ObjectiveKind::Mmd;
  obj.x = std::move(x);
  obj.mask = std::move(mask);
  int k = 0;
  for (int m : obj.mask) k += m;
  obj.support = full_support(k);
  obj.target_pdf = std::move(target_pdf);
  obj.kernel = std::move(kernel);
  return obj;
}

Objective Objective::maxcut(std::vector<int> x, std::vector<int> mask,
                            WeightedGraph graph) {
  Objective obj;
  obj.kind = ObjectiveKind::MaxcutExpectation;
  obj.x = std::move(x);
  obj.mask = std::move(mask);
  int k = 0;
  for (int m : obj.mask) k += m;
  obj.support = full_support(k);
  obj.graph = std::move(graph);
  return obj;
}

void Objective::validate(int n_modes) const {
  if (static_cast<int>(x.size()) != n_modes ||
      static_cast<int>(mask.size()) != n_modes)
    throw std::invalid_argument("objective x/mask length mismatch");
  if (support.empty()) throw std::invalid_argument("objective support is empty");
  int k = 0;
  for (int m : mask) k += m;
  for (const auto& y : support)
    if (static_cast<int>(y.size()) != k)
      throw std::invalid_argument("support entry length mismatch");
  if (kind == ObjectiveKind::Mmd) {
    if (support.size() != size_t{1} << k)
      throw std::invalid_argument("Mmd support must cover the full outcome space");
    if (target_pdf.size() != static_cast<Eigen::Index>(support.size()))
      throw std::invalid_argument("Mmd target pdf size mismatch");
    if (kernel.gram.rows() != target_pdf.size())
      throw std::invalid_argument("Mmd kernel size mismatch");
  }
  if (kind == ObjectiveKind::MaxcutExpectation && graph.n_nodes != k)
    throw std::invalid_argument("graph node count must equal measured qubits");
}

double evaluate(const Objective& obj, const Circuit& circuit, bool parallel) {
  obj.validate(circuit.n_modes);
  std::vector<MeasurementQuery> queries;
  queries.reserve(obj.support.size());
  for (const auto& y : obj.support) queries.push_back({obj.x, obj.mask, y});
  const std::vector<double> probs = probability_batch(circuit, queries, parallel);

  switch (obj.kind) {
    case ObjectiveKind::NegProb:
      return -probs[0];
    case ObjectiveKind::Mmd: {
      Vector model = Eigen::Map<const Vector>(probs.data(), probs.size());
      Vector diff = obj.target_pdf - model;
      return diff.dot(obj.kernel.gram * diff);
    }
    case ObjectiveKind::MaxcutExpectation: {
      double num = 0.0, den = 0.0;
      for (size_t i = 0; i < probs.size(); ++i) {
        num += probs[i] * (-obj.graph.cut_value(obj.support[i]));
        den += probs[i];
      }
      if (den <= 0.0)
        throw std::runtime_error("maxcut expectation: zero probability mass");
      return num / den;
    }
  }
  throw std::logic_error("unreachable");
}

Vector gradient_fd(const Objective& obj, const Circuit& circuit, double step,
                   bool parallel) {
  if (!(step > 0.0)) throw std::invalid_argument("fd step must be positive");
  const Vector params = read_parameters(circuit);
  const Eigen::Index p = params.size();
  Vector plus(p), minus(p);
  parallel_for(2 * static_cast<size_t>(p), parallel, [&](size_t task) {
    const Eigen::Index idx = static_cast<Eigen::Index>(task / 2);
    const double sign = (task % 2 == 0) ? 1.0 : -1.0;
    Circuit shifted = circuit;
    Vector th = params;
    th[idx] += sign * step;
    write_parameters(shifted, th);
    const double loss = evaluate(obj, shifted, /*parallel=*/false);
    if (!std::isfinite(loss)) throw std::runtime_error("non-finite loss");
    (sign > 0 ? plus : minus)[idx] = loss;
  });
  return (plus - minus) / (2.0 * step);
}

AdamState AdamState::init(int n_params, double lr, double beta1, double beta2) {
  AdamState s;
  s.lr = lr;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.m = Vector::Zero(n_params);
  s.v = Vector::Zero(n_params);
  return s;
}

Vector adam_step(AdamState& state, const Vector& params, const Vector& grad) {
  if (params.size() != grad.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_step shape mismatch");
  state.step_count += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(state.beta1, state.step_count);
  const double bc2 = 1.0 - std::pow(state.beta2, state.step_count);
  Vector m_hat = state.m / bc1;
  Vector v_hat = state.v / bc2;
  return params.array() -
         state.lr * m_hat.array() / (v_hat.array().sqrt() + state.eps);
}

TrainResult train(const Objective& obj, Circuit circuit, const TrainOptions& opts) {
  if (opts.iters < 1) throw std::invalid_argument("iters must be >= 1");
  if (opts.randomize_init) {
    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> unif(0.0, M_PI);
    Vector params(circuit.param_count());
    for (Eigen::Index i = 0; i < params.size(); ++i) params[i] = unif(rng);
    write_parameters(circuit, params);
  }
  AdamState state = AdamState::init(circuit.param_count(), opts.lr, opts.beta1);
  TrainResult result;
  for (int it = 0; it < opts.iters; ++it) {
    const double loss = evaluate(obj, circuit, opts.parallel);
    if (!std::isfinite(loss)) throw std::runtime_error("non-finite loss");
    result.loss_trace.push_back(loss);
    if (opts.on_iteration) opts.on_iteration(it, loss);
    const Vector grad = gradient_fd(obj, circuit, opts.fd_step, opts.parallel);
    const Vector updated = adam_step(state, read_parameters(circuit), grad);
    write_parameters(circuit, updated);
  }
  result.circuit = std::move(circuit);
  return result;
}

}  // namespace freeferm
