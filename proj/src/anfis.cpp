#include "qsanfis/anfis.hpp"

#include "qsanfis/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qsanfis {

RuleOrder parse_rule_order(const std::string& text) {
  if (text == "first") return RuleOrder::First;
  if (text == "zero") return RuleOrder::Zero;
  throw std::invalid_argument("rule order must be 'zero' or 'first', got '" + text + "'");
}

const char* to_string(RuleOrder order) { return order == RuleOrder::First ? "first" : "zero"; }

double FuzzyRule::output(const Eigen::VectorXd& p) const {
  double y = consequent(0);
  for (Eigen::Index j = 1; j < consequent.size(); ++j) y += consequent(j) * p(j - 1);
  return y;
}

AnfisModel::AnfisModel(std::vector<FuzzyRule> rules, std::size_t input_dim, RuleOrder order)
    : rules_(std::move(rules)), input_dim_(input_dim), order_(order) {
  validate();
}

void AnfisModel::validate() const {
  if (rules_.empty()) throw std::invalid_argument("ANFIS model needs at least one rule");
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& rule = rules_[i];
    if (rule.premise.size() != input_dim_)
      throw std::invalid_argument("rule " + std::to_string(i) + ": premise size differs from input dimension");
    if (static_cast<std::size_t>(rule.consequent.size()) != consequent_size())
      throw std::invalid_argument("rule " + std::to_string(i) + ": wrong consequent length");
    for (const auto& mf : rule.premise)
      if (!(mf.width > 0.0)) throw std::invalid_argument("rule " + std::to_string(i) + ": non-positive MF width");
  }
  if (!input_names.empty() && input_names.size() != input_dim_)
    throw std::invalid_argument("input name count differs from input dimension");
}

AnfisModel build_from_clusters(const ClusterModel& clusters, RuleOrder order) {
  const auto n = clusters.dim();
  std::vector<FuzzyRule> rules(clusters.k());
  for (std::size_t i = 0; i < clusters.k(); ++i) {
    auto& rule = rules[i];
    rule.premise.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
      rule.premise[j] = {clusters.centers(r, c), std::max(clusters.spread(r, c), kSpreadFloor)};
    }
    rule.consequent = Eigen::VectorXd::Zero(order == RuleOrder::First ? static_cast<Eigen::Index>(n) + 1 : 1);
  }
  return AnfisModel(std::move(rules), n, order);
}

ForwardTrace forward(const AnfisModel& model, const Eigen::VectorXd& p) {
  if (static_cast<std::size_t>(p.size()) != model.input_dim())
    throw std::invalid_argument("forward: input has " + std::to_string(p.size()) + " components, model expects " +
                                std::to_string(model.input_dim()));
  const auto r = static_cast<Eigen::Index>(model.rule_count());
  const auto n = static_cast<Eigen::Index>(model.input_dim());
  ForwardTrace t;
  t.memberships.resize(r, n);
  t.w.resize(r);
  t.rule_outputs.resize(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& rule = model.rules()[static_cast<std::size_t>(i)];
    double log_w = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double log_mu = rule.premise[static_cast<std::size_t>(j)].log_degree(p(j));
      t.memberships(i, j) = std::exp(log_mu);
      log_w += log_mu;
    }
    t.w(i) = std::exp(log_w);
    t.rule_outputs(i) = rule.output(p);
  }
  const double total = t.w.sum();
  if (total < kFiringFloor) {
    t.fallback = true;
    t.w_bar = Eigen::VectorXd::Constant(r, 1.0 / static_cast<double>(r));
  } else {
    t.w_bar = t.w / total;
  }
  t.y_hat = t.w_bar.dot(t.rule_outputs);
  return t;
}

Eigen::VectorXd predict_batch(const AnfisModel& model, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() > 0 && static_cast<std::size_t>(inputs.cols()) != model.input_dim())
    throw std::invalid_argument("predict_batch: data has " + std::to_string(inputs.cols()) +
                                " input columns, model expects " + std::to_string(model.input_dim()));
  Eigen::VectorXd out(inputs.rows());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) out(i) = forward(model, inputs.row(i).transpose()).y_hat;
  return out;
}

Eigen::VectorXd predict_batch(const AnfisModel& model, const Dataset& data) {
  if (data.input_dim() != model.input_dim())
    throw std::invalid_argument("predict_batch: dataset has " + std::to_string(data.input_dim()) +
                                " inputs, model expects " + std::to_string(model.input_dim()));
  return predict_batch(model, data.inputs());
}

Eigen::VectorXd input_gradient(const AnfisModel& model, const Eigen::VectorXd& p) {
  const auto t = forward(model, p);
  const auto n = static_cast<Eigen::Index>(model.input_dim());
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < model.rule_count(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto& rule = model.rules()[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      // consequent slope, then firing-strength redistribution
      if (model.order() == RuleOrder::First) grad(j) += t.w_bar(ii) * rule.consequent(j + 1);
      if (!t.fallback) {
        const auto& mf = rule.premise[static_cast<std::size_t>(j)];
        const double dlogw = -(p(j) - mf.mean) / (mf.width * mf.width);
        grad(j) += t.w_bar(ii) * (t.rule_outputs(ii) - t.y_hat) * dlogw;
      }
    }
  }
  return grad;
}

void save_model(std::ostream& out, const AnfisModel& model) {
  out << "anfis " << to_string(model.order()) << ' ' << model.input_dim() << ' ' << model.rule_count() << '\n';
  out << "inputs";
  for (const auto& name : model.input_names) out << ' ' << name;
  out << '\n' << "target " << model.target_name << '\n';
  for (std::size_t i = 0; i < model.rule_count(); ++i) {
    const auto& rule = model.rules()[i];
    out << "rule " << i << '\n';
    out << "mean";
    for (const auto& mf : rule.premise) out << ' ' << format_double(mf.mean);
    out << '\n' << "width";
    for (const auto& mf : rule.premise) out << ' ' << format_double(mf.width);
    out << '\n' << "consequent";
    for (Eigen::Index j = 0; j < rule.consequent.size(); ++j) out << ' ' << format_double(rule.consequent(j));
    out << '\n';
  }
}

namespace {

std::vector<std::string> next_record(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_fields(line, ' ');
    fields.erase(std::remove(fields.begin(), fields.end(), std::string()), fields.end());
    if (fields.empty() || fields[0] != key)
      throw std::runtime_error("model file: expected '" + key + "' line, got '" + line + "'");
    fields.erase(fields.begin());
    return fields;
  }
  throw std::runtime_error("model file: unexpected end of input, expected '" + key + "'");
}

std::vector<double> numbers(const std::vector<std::string>& fields, std::size_t expected, const std::string& key) {
  if (fields.size() != expected)
    throw std::runtime_error("model file: '" + key + "' expects " + std::to_string(expected) + " values, found " +
                             std::to_string(fields.size()));
  std::vector<double> v;
  v.reserve(fields.size());
  for (const auto& f : fields) v.push_back(parse_double(f));
  return v;
}

}  // namespace

AnfisModel load_model(std::istream& in) {
  const auto head = next_record(in, "anfis");
  if (head.size() != 3) throw std::runtime_error("model file: malformed header");
  const auto order = parse_rule_order(head[0]);
  const auto n = std::stoul(head[1]);
  const auto r = std::stoul(head[2]);
  auto names = next_record(in, "inputs");
  auto target = next_record(in, "target");

  std::vector<FuzzyRule> rules(r);
  const std::size_t m = order == RuleOrder::First ? n + 1 : 1;
  for (std::size_t i = 0; i < r; ++i) {
    const auto id = next_record(in, "rule");
    if (id.size() != 1 || std::stoul(id[0]) != i) throw std::runtime_error("model file: rules out of order");
    const auto means = numbers(next_record(in, "mean"), n, "mean");
    const auto widths = numbers(next_record(in, "width"), n, "width");
    const auto coeffs = numbers(next_record(in, "consequent"), m, "consequent");
    rules[i].premise.resize(n);
    for (std::size_t j = 0; j < n; ++j) rules[i].premise[j] = {means[j], widths[j]};
    rules[i].consequent = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(m));
  }
  AnfisModel model(std::move(rules), n, order);
  model.input_names = std::move(names);
  model.target_name = target.empty() ? std::string() : target[0];
  model.validate();
  return model;
}

}  // namespace qsanfis
