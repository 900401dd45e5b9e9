#include "carbonforge/eval/lci_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "carbonforge/core/error.hpp"

namespace carbonforge::eval {

namespace {

using Bucket = std::pair<std::string, Unit>;

void check_same_da(const LifeCycleInventory& a, const LifeCycleInventory& b) {
  const auto& ca = a.da.component_classes();
  const auto& cb = b.da.component_classes();
  if (std::set<std::string>(ca.begin(), ca.end()) != std::set<std::string>(cb.begin(), cb.end())) {
    throw_data_error("inventories do not share a data abstraction");
  }
}

std::map<Bucket, double> quantities(const LifeCycleInventory& lci) {
  std::map<Bucket, double> out;
  for (const auto& e : lci.entries) out[{e.component_class, e.unit}] += e.quantity;
  return out;
}

double kl_to_mixture(const std::vector<double>& p, const std::vector<double>& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += p[i] * std::log2(p[i] / m[i]);
  }
  return s;
}

}  // namespace

double lci_f1(const LifeCycleInventory& predicted, const LifeCycleInventory& reference) {
  check_same_da(predicted, reference);
  std::map<std::string, std::size_t> np, nr;
  for (const auto& e : predicted.entries) ++np[e.component_class];
  for (const auto& e : reference.entries) ++nr[e.component_class];
  const double total_p = static_cast<double>(predicted.entries.size());
  const double total_r = static_cast<double>(reference.entries.size());
  if (total_p == 0.0 && total_r == 0.0) return 1.0;
  if (total_p == 0.0 || total_r == 0.0) return 0.0;
  double matched = 0.0;
  for (const auto& [cls, n] : np) {
    auto it = nr.find(cls);
    if (it != nr.end()) matched += static_cast<double>(std::min(n, it->second));
  }
  if (matched == 0.0) return 0.0;
  const double precision = matched / total_p;
  const double recall = matched / total_r;
  return 2.0 * precision * recall / (precision + recall);
}

double lci_jsd(const LifeCycleInventory& predicted, const LifeCycleInventory& reference) {
  check_same_da(predicted, reference);
  const auto qp = quantities(predicted);
  const auto qr = quantities(reference);
  std::set<Bucket> keys;
  double tp = 0.0, tr = 0.0;
  for (const auto& [k, v] : qp) {
    keys.insert(k);
    tp += v;
  }
  for (const auto& [k, v] : qr) {
    keys.insert(k);
    tr += v;
  }
  if (!(tp > 0.0) || !(tr > 0.0)) throw_data_error("JSD needs positive total quantity");
  std::vector<double> p, r, m;
  for (const auto& k : keys) {
    const double a = qp.count(k) ? qp.at(k) / tp : 0.0;
    const double b = qr.count(k) ? qr.at(k) / tr : 0.0;
    p.push_back(a);
    r.push_back(b);
    m.push_back(0.5 * (a + b));
  }
  const double jsd = 0.5 * kl_to_mixture(p, m) + 0.5 * kl_to_mixture(r, m);
  return std::clamp(jsd, 0.0, 1.0);
}

double lci_l1(const LifeCycleInventory& predicted, const LifeCycleInventory& reference) {
  check_same_da(predicted, reference);
  const auto qp = quantities(predicted);
  const auto qr = quantities(reference);
  std::set<Bucket> keys;
  for (const auto& [k, v] : qp) keys.insert(k);
  for (const auto& [k, v] : qr) keys.insert(k);
  double s = 0.0;
  for (const auto& k : keys) {
    const double a = qp.count(k) ? qp.at(k) : 0.0;
    const double b = qr.count(k) ? qr.at(k) : 0.0;
    s += std::abs(a - b);
  }
  return s;
}

}  // namespace carbonforge::eval
