#include "carbonforge/agent/data_abstraction.hpp"

#include <array>
#include <cctype>

#include "carbonforge/core/error.hpp"
#include "carbonforge/ingestion/corpus.hpp"

namespace carbonforge::agent {

namespace {

struct Rule {
  const char* product_class;
  std::vector<const char*> keywords;
  bool battery;
  bool display;
};

const std::vector<Rule>& rules() {
  static const std::vector<Rule> table = {
      {"smartphone", {"iphone", "phone", "smartphone", "pixel", "galaxy", "fairphone"}, true, true},
      {"tablet", {"ipad", "tablet"}, true, true},
      {"laptop", {"laptop", "notebook", "macbook", "xps", "thinkpad", "zenbook"}, true, true},
      {"wearable", {"watch", "wearable"}, true, true},
      {"monitor", {"monitor", "display"}, false, true},
      {"motherboard", {"motherboard", "mainboard", "z790", "b650", "x670", "strix"}, false, false},
      {"gpu", {"gpu", "geforce", "rtx", "radeon", "graphics"}, false, false},
      {"desktop", {"desktop", "optiplex", "workstation"}, false, false},
  };
  return table;
}

std::vector<std::string> words(std::string_view query) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : ingest::lowercase(query)) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::string classify_product(std::string_view query) {
  const auto ws = words(query);
  for (const auto& rule : rules()) {
    for (const char* kw : rule.keywords) {
      for (const auto& w : ws) {
        if (w == kw) return rule.product_class;
      }
    }
  }
  return "electronics";
}

DataAbstraction build_data_abstraction(std::string_view query, std::vector<std::string>* warnings) {
  if (words(query).empty()) throw_usage_error("empty product query");
  const std::string cls = classify_product(query);
  std::vector<std::string> classes = {"PCB", "IC", "sensor", "passive", "mechanical"};
  std::map<std::string, std::vector<std::string>> required = {{"PCB", {"layer_count"}}};
  bool battery = false;
  bool display = false;
  for (const auto& rule : rules()) {
    if (cls == rule.product_class) {
      battery = rule.battery;
      display = rule.display;
    }
  }
  if (cls == "electronics" && warnings) {
    warnings->push_back("unknown product class for '" + std::string(query) +
                        "'; using the default electronics abstraction");
  }
  if (battery) {
    classes.push_back("battery");
    required["battery"] = {"capacity_wh"};
  }
  if (display) {
    classes.push_back("display");
    required["display"] = {"display_type"};
  }
  return DataAbstraction(cls, std::move(classes), std::move(required));
}

}  // namespace carbonforge::agent
