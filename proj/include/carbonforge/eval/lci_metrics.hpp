#pragma once

#include "carbonforge/core/inventory.hpp"

namespace carbonforge::eval {

/// F1 over the multisets of entry classes: matched = Σ_c min(n_pred(c),
/// n_ref(c)). Two empty inventories score 1.
double lci_f1(const LifeCycleInventory& predicted, const LifeCycleInventory& reference);

/// Base-2 Jensen–Shannon divergence between the quantity distributions over
/// (class, unit) buckets. Zero total quantity on either side is an error.
double lci_jsd(const LifeCycleInventory& predicted, const LifeCycleInventory& reference);

/// Σ |q_pred − q_ref| over the union of (class, unit) buckets.
double lci_l1(const LifeCycleInventory& predicted, const LifeCycleInventory& reference);

}  // namespace carbonforge::eval
