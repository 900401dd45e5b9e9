#include "carbonforge/agent/critic.hpp"

#include <set>

#include "carbonforge/ingestion/corpus.hpp"

namespace carbonforge::agent {

std::string_view to_string(QueryKind k) {
  switch (k) {
    case QueryKind::missing_class: return "missing_class";
    case QueryKind::missing_attribute: return "missing_attribute";
    case QueryKind::unresolved_reference: return "unresolved_reference";
  }
  return "missing_class";
}

bool is_placeholder(const InventoryEntry& e) { return e.attributes.count(kUnresolved) > 0; }

std::vector<CriticQuery> critique(const LifeCycleInventory& lci, const DataAbstraction& da) {
  const std::string product = ingest::lowercase(lci.product);
  std::vector<CriticQuery> out;

  for (const auto& cls : da.component_classes()) {
    bool present = false;
    for (const auto& e : lci.entries) present = present || e.component_class == cls;
    if (present) continue;
    out.push_back({QueryKind::missing_class, product + "|" + ingest::lowercase(cls),
                   "Which " + cls + " components does " + lci.product + " contain?", cls,
                   std::nullopt});
  }

  for (const auto& cls : da.component_classes()) {
    for (const auto& attr : da.required_for(cls)) {
      bool missing = false;
      for (const auto& e : lci.entries) {
        if (e.component_class == cls && !is_placeholder(e) && !e.attributes.count(attr)) {
          missing = true;
        }
      }
      if (!missing) continue;
      out.push_back({QueryKind::missing_attribute,
                     product + "|" + ingest::lowercase(cls) + "|" + ingest::lowercase(attr),
                     "What is the " + attr + " of the " + cls + " in " + lci.product + "?", cls,
                     attr});
    }
  }

  std::set<std::string> keys;
  for (const auto& e : lci.entries) {
    if (!is_placeholder(e)) continue;
    const auto& v = e.attributes.at(kUnresolved);
    const std::string key =
        ingest::lowercase(std::holds_alternative<std::string>(v) ? std::get<std::string>(v) : "");
    if (key.empty() || !keys.insert(key).second) continue;
    out.push_back({QueryKind::unresolved_reference, key,
                   "Resolve '" + e.description + "' (" + key + ") for " + lci.product + ".",
                   e.component_class, std::nullopt});
  }
  return out;
}

}  // namespace carbonforge::agent
