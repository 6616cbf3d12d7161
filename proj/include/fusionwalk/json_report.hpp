#pragma once

#include <json.hpp>

#include "fusionwalk/chain_analysis.hpp"
#include "fusionwalk/simulator.hpp"

namespace fusionwalk {

// Rationals are serialised as "num/den" strings so the JSON stays exact.
inline nlohmann::ordered_json to_json(const StationaryDistribution& d) {
  nlohmann::ordered_json probs = nlohmann::ordered_json::array();
  for (const auto& x : d.probs) probs.push_back(to_fraction_string(x));
  return {{"support", support_name(d.component)}, {"probs", std::move(probs)}};
}

inline nlohmann::ordered_json to_json(const ChainReport& r) {
  nlohmann::ordered_json j;
  j["p"] = r.p;
  j["n"] = r.n;
  j["weighting"] = r.weighting;
  j["classification"] = classification_name(r.classification);
  j["components"] = r.components;
  auto st = nlohmann::ordered_json::array();
  for (const auto& d : r.stationary_distributions) st.push_back(to_json(d));
  j["stationary"] = std::move(st);
  j["spectrum"] = r.spectrum;
  j["lambda_star"] = r.lambda_star;
  j["mixing_bound_at"] = {{"eps", r.eps},
                          {"value", r.mixing_bound ? nlohmann::ordered_json(*r.mixing_bound)
                                                   : nlohmann::ordered_json(nullptr)}};
  return j;
}

inline nlohmann::ordered_json to_json(const EmpiricalResult& r) {
  nlohmann::ordered_json j;
  j["counts"] = r.counts;
  j["empirical"] = r.empirical;
  j["tv_to_target"] = r.tv_to_target;
  j["steps"] = r.steps;
  j["trajectories"] = r.trajectories;
  j["seed"] = r.seed;
  if (!r.occupancy.empty()) j["occupancy"] = r.occupancy;
  return j;
}

}  // namespace fusionwalk
