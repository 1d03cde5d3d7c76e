#include "mcsa/ann.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "mcsa/error.hpp"
#include "mcsa/random.hpp"
#include "mcsa/text.hpp"

namespace mcsa {

namespace {

constexpr std::string_view kMagic = "MCSA-MLP v1";

Eigen::VectorXd activate(Activation a, const Eigen::VectorXd& z) {
  if (a == Activation::tanh) return z.array().tanh();
  return (1.0 + (-z.array()).exp()).inverse();
}

// Derivative expressed through the activation output h.
Eigen::VectorXd activate_prime(Activation a, const Eigen::VectorXd& h) {
  if (a == Activation::tanh) return 1.0 - h.array().square();
  return h.array() * (1.0 - h.array());
}

struct Pass {
  Eigen::VectorXd hidden;
  Eigen::VectorXd logits;
  Eigen::VectorXd probs;
  double log_norm = 0.0;  // logsumexp(logits)
};

Pass run(const MlpModel& m, std::span<const double> x) {
  if (x.size() != m.input_size()) {
    throw DomainError("feature width " + std::to_string(x.size()) + " does not match model input " +
                      std::to_string(m.input_size()));
  }
  const Eigen::Map<const Eigen::VectorXd> in(x.data(), static_cast<Eigen::Index>(x.size()));
  Pass p;
  p.hidden = activate(m.activation, m.w1 * in + m.b1);
  p.logits = m.w2 * p.hidden + m.b2;
  const double top = p.logits.maxCoeff();
  const Eigen::ArrayXd e = (p.logits.array() - top).exp();
  const double sum = e.sum();
  p.probs = e / sum;
  p.log_norm = top + std::log(sum);
  return p;
}

std::size_t class_index(const MlpModel& m, FaultLabel label) {
  const auto it = std::find(m.classes.begin(), m.classes.end(), label);
  if (it == m.classes.end()) {
    throw TrainingError("label " + std::string(to_string(label)) + " is not a class of the model");
  }
  return static_cast<std::size_t>(it - m.classes.begin());
}

double weight_penalty(const MlpModel& m, double l2) {
  if (l2 == 0.0) return 0.0;
  return 0.5 * l2 * (m.w1.squaredNorm() + m.w2.squaredNorm());
}

bool all_finite(const MlpModel& m) {
  return m.w1.allFinite() && m.b1.allFinite() && m.w2.allFinite() && m.b2.allFinite();
}

// Visits every parameter as a mutable scalar, in save order.
template <typename Fn>
void for_each_param(MlpModel& m, Gradients& g, Fn&& fn) {
  auto visit = [&](auto& p, auto& gp) {
    for (Eigen::Index i = 0; i < p.size(); ++i) fn(p.data()[i], gp.data()[i]);
  };
  visit(m.w1, g.w1);
  visit(m.b1, g.b1);
  visit(m.w2, g.w2);
  visit(m.b2, g.b2);
}

}  // namespace

std::string_view to_string(Activation a) { return a == Activation::tanh ? "tanh" : "sigmoid"; }

Activation parse_activation(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  throw ParseError("unknown activation '" + std::string(name) + "'", 0);
}

void MlpModel::validate() const {
  if (w1.rows() < 1 || w1.cols() < 1 || w2.rows() < 1) throw ConfigError("model has an empty layer");
  if (b1.size() != w1.rows() || w2.cols() != w1.rows() || b2.size() != w2.rows()) {
    throw ConfigError("model parameter shapes do not chain");
  }
  if (classes.size() != output_size()) throw ConfigError("class list does not match the output layer");
  if (!all_finite(*this)) throw ConfigError("model has non-finite parameters");
}

std::vector<FaultLabel> default_classes(std::size_t n) {
  const std::vector<FaultLabel> all{FaultLabel::healthy, FaultLabel::inter_turn_minor,
                                    FaultLabel::inter_turn_severe, FaultLabel::broken_bar};
  if (n < 1 || n > all.size()) {
    throw ConfigError("no default class names for " + std::to_string(n) + " outputs");
  }
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n)};
}

MlpModel init_model(std::span<const std::size_t> layer_sizes, Activation activation,
                    std::uint64_t seed, std::vector<FaultLabel> classes) {
  if (layer_sizes.size() != 3) throw ConfigError("layer_sizes must be {input, hidden, output}");
  for (auto s : layer_sizes) {
    if (s < 1) throw ConfigError("every layer needs at least one unit");
  }
  const auto d = static_cast<Eigen::Index>(layer_sizes[0]);
  const auto h = static_cast<Eigen::Index>(layer_sizes[1]);
  const auto c = static_cast<Eigen::Index>(layer_sizes[2]);

  MlpModel m;
  m.activation = activation;
  m.classes = classes.empty() ? default_classes(layer_sizes[2]) : std::move(classes);
  if (m.classes.size() != layer_sizes[2]) throw ConfigError("class list does not match the output layer");
  if (std::set<FaultLabel>(m.classes.begin(), m.classes.end()).size() != m.classes.size()) {
    throw ConfigError("class list has duplicates");
  }

  Rng rng(seed);
  m.w1.resize(h, d);
  m.w2.resize(c, h);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(d));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(h));
  // Row-major fill order keeps the draw sequence independent of storage order.
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index k = 0; k < d; ++k) m.w1(r, k) = s1 * rng.gaussian();
  for (Eigen::Index r = 0; r < c; ++r)
    for (Eigen::Index k = 0; k < h; ++k) m.w2(r, k) = s2 * rng.gaussian();
  m.b1 = Eigen::VectorXd::Zero(h);
  m.b2 = Eigen::VectorXd::Zero(c);
  return m;
}

std::vector<double> forward(const MlpModel& m, std::span<const double> x) {
  const Pass p = run(m, x);
  return {p.probs.data(), p.probs.data() + p.probs.size()};
}

double loss_and_gradient(const MlpModel& m, std::span<const double> x, std::size_t y, Gradients* grad) {
  if (y >= m.output_size()) throw DomainError("class index out of range");
  const Pass p = run(m, x);
  const double loss = p.log_norm - p.logits(static_cast<Eigen::Index>(y));
  if (grad) {
    const Eigen::Map<const Eigen::VectorXd> in(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::VectorXd dlogits = p.probs;
    dlogits(static_cast<Eigen::Index>(y)) -= 1.0;
    grad->w2 = dlogits * p.hidden.transpose();
    grad->b2 = dlogits;
    const Eigen::VectorXd dhidden =
        (m.w2.transpose() * dlogits).array() * activate_prime(m.activation, p.hidden).array();
    grad->w1 = dhidden * in.transpose();
    grad->b1 = dhidden;
  }
  return loss;
}

double gradient_check(const MlpModel& m, std::span<const double> x, std::size_t y, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1e-2)) throw DomainError("epsilon must lie in (0, 1e-2]");
  Gradients analytic;
  loss_and_gradient(m, x, y, &analytic);

  MlpModel probe = m;
  double worst = 0.0;
  for_each_param(probe, analytic, [&](double& param, double g_a) {
    const double saved = param;
    param = saved + epsilon;
    const double up = loss_and_gradient(probe, x, y);
    param = saved - epsilon;
    const double down = loss_and_gradient(probe, x, y);
    param = saved;
    const double g_n = (up - down) / (2.0 * epsilon);
    const double denom = std::max({std::abs(g_a), std::abs(g_n), 1e-12});
    worst = std::max(worst, std::abs(g_a - g_n) / denom);
  });
  return worst;
}

double dataset_loss(const MlpModel& m, const std::vector<FeatureVector>& data, double l2) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const auto& fv : data) {
    if (!fv.label) throw TrainingError("unlabelled feature vector");
    total += loss_and_gradient(m, fv.values, class_index(m, *fv.label));
  }
  return total / static_cast<double>(data.size()) + weight_penalty(m, l2);
}

TrainResult train(const MlpModel& initial, const std::vector<FeatureVector>& data, const TrainConfig& cfg) {
  initial.validate();
  if (!(cfg.learning_rate >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (!(cfg.l2 >= 0.0)) throw ConfigError("l2 must be >= 0");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.batch_size < 1 || cfg.batch_size > data.size()) {
    throw ConfigError("batch size " + std::to_string(cfg.batch_size) + " must lie in [1, " +
                      std::to_string(data.size()) + "]");
  }

  std::vector<std::size_t> targets;
  targets.reserve(data.size());
  for (const auto& fv : data) {
    if (!fv.label) throw TrainingError("training data contains an unlabelled vector");
    if (fv.values.size() != initial.input_size()) {
      throw DomainError("feature width " + std::to_string(fv.values.size()) +
                        " does not match model input " + std::to_string(initial.input_size()));
    }
    targets.push_back(class_index(initial, *fv.label));
  }
  if (std::set<std::size_t>(targets.begin(), targets.end()).size() < 2) {
    throw TrainingError("training needs at least two distinct labels");
  }

  TrainResult result{initial, {}};
  MlpModel& m = result.model;
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Gradients g, acc;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng.index(i + 1)]);
    }
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(start + cfg.batch_size, order.size());
      acc.w1 = Eigen::MatrixXd::Zero(m.w1.rows(), m.w1.cols());
      acc.b1 = Eigen::VectorXd::Zero(m.b1.size());
      acc.w2 = Eigen::MatrixXd::Zero(m.w2.rows(), m.w2.cols());
      acc.b2 = Eigen::VectorXd::Zero(m.b2.size());
      for (std::size_t i = start; i < stop; ++i) {
        const std::size_t idx = order[i];
        loss_and_gradient(m, data[idx].values, targets[idx], &g);
        acc.w1 += g.w1;
        acc.b1 += g.b1;
        acc.w2 += g.w2;
        acc.b2 += g.b2;
      }
      const double step = cfg.learning_rate / static_cast<double>(stop - start);
      m.w1 -= step * acc.w1 + cfg.learning_rate * cfg.l2 * m.w1;
      m.b1 -= step * acc.b1;
      m.w2 -= step * acc.w2 + cfg.learning_rate * cfg.l2 * m.w2;
      m.b2 -= step * acc.b2;
    }
    const double loss = dataset_loss(m, data, cfg.l2);
    if (!std::isfinite(loss) || !all_finite(m)) throw DivergenceError(epoch);
    result.loss_history.push_back(loss);
  }
  return result;
}

Classification classify(const MlpModel& m, std::span<const double> x, double reject_threshold) {
  const Pass p = run(m, x);
  Eigen::Index best = 0;
  const double conf = p.probs.maxCoeff(&best);
  return {m.classes[static_cast<std::size_t>(best)], conf, conf < reject_threshold};
}

double accuracy(const MlpModel& m, const std::vector<FeatureVector>& data) {
  if (data.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& fv : data) {
    if (fv.label && classify(m, fv.values).label == *fv.label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

void save_model(std::ostream& out, const MlpModel& m) {
  m.validate();
  out << kMagic << '\n';
  out << "layers " << m.input_size() << ' ' << m.hidden_size() << ' ' << m.output_size() << '\n';
  out << "activation " << to_string(m.activation) << '\n';
  out << "classes";
  for (auto c : m.classes) out << ' ' << to_string(c);
  out << '\n';
  auto block = [&](const char* name, const Eigen::MatrixXd& mat) {
    out << name << ' ' << mat.rows() << ' ' << mat.cols() << '\n';
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        out << (c ? " " : "") << text::format_exact(mat(r, c));
      }
      out << '\n';
    }
  };
  block("W1", m.w1);
  block("b1", m.b1);
  block("W2", m.w2);
  block("b2", m.b2);
}

MlpModel load_model(std::istream& in) {
  std::size_t line_no = 0;
  std::string raw;
  auto next = [&]() -> std::string {
    while (std::getline(in, raw)) {
      ++line_no;
      const auto s = text::trim(text::chomp(raw));
      if (!s.empty()) return std::string(s);
    }
    throw ParseError("unexpected end of model file", line_no);
  };
  auto words = [](const std::string& s) {
    std::vector<std::string> w;
    std::istringstream ss(s);
    for (std::string t; ss >> t;) w.push_back(t);
    return w;
  };

  if (next() != kMagic) throw ParseError("not an MCSA-MLP v1 model file", line_no);

  auto sizes = words(next());
  if (sizes.size() != 4 || sizes[0] != "layers") throw ParseError("expected 'layers D H C'", line_no);
  std::size_t dims[3];
  for (int i = 0; i < 3; ++i) {
    long long v = 0;
    if (!text::parse_int(sizes[static_cast<std::size_t>(i) + 1], v) || v < 1) {
      throw ParseError("bad layer size", line_no);
    }
    dims[i] = static_cast<std::size_t>(v);
  }

  MlpModel m;
  auto act = words(next());
  if (act.size() != 2 || act[0] != "activation") throw ParseError("expected 'activation <name>'", line_no);
  try {
    m.activation = parse_activation(act[1]);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_no);
  }
  auto cls = words(next());
  if (cls.empty() || cls[0] != "classes") throw ParseError("expected 'classes ...'", line_no);
  for (std::size_t i = 1; i < cls.size(); ++i) {
    try {
      m.classes.push_back(parse_fault_label(cls[i]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }

  auto read_block = [&](const char* name, std::size_t rows, std::size_t cols) {
    const auto head = words(next());
    if (head.size() != 3 || head[0] != name || head[1] != std::to_string(rows) ||
        head[2] != std::to_string(cols)) {
      throw ParseError(std::string("expected '") + name + " " + std::to_string(rows) + " " +
                           std::to_string(cols) + "'",
                       line_no);
    }
    Eigen::MatrixXd mat(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const auto vals = words(next());
      if (vals.size() != cols) throw ParseError("expected " + std::to_string(cols) + " values", line_no);
      for (std::size_t c = 0; c < cols; ++c) {
        double v = 0.0;
        if (!text::parse_double(vals[c], v)) throw ParseError("bad parameter '" + vals[c] + "'", line_no);
        mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      }
    }
    return mat;
  };
  m.w1 = read_block("W1", dims[1], dims[0]);
  m.b1 = read_block("b1", dims[1], 1);
  m.w2 = read_block("W2", dims[2], dims[1]);
  m.b2 = read_block("b2", dims[2], 1);
  try {
    m.validate();
  } catch (const ConfigError& e) {
    throw ParseError(e.what(), line_no);
  }
  return m;
}

}  // namespace mcsa
