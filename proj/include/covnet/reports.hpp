#pragma once

// JSON and CSV renderings of experiment reports. NaN becomes JSON null.

#include "covnet/experiments.hpp"

#include <json.hpp>

#include <string>

namespace covnet::reports {

nlohmann::json to_json(const experiments::Summary& s);
nlohmann::json to_json(const experiments::Metrics& m);
nlohmann::json to_json(const experiments::StabilityReport& r);
nlohmann::json to_json(const experiments::ScalingReport& r);
nlohmann::json to_json(const experiments::LipschitzReport& r);
nlohmann::json to_json(const experiments::TransferReport& r);

/// Fitted PCA regressor including its eigenbasis; doubles round-trip exactly.
nlohmann::json to_json(const baseline::PcaRegressor& reg);
baseline::PcaRegressor regressor_from_json(const nlohmann::json& j);

/// One row per (trial, covariance): trial,n_prime,mae_train,mae_test,...
/// The nominal evaluation is the row with n_prime == nominal_n and kind "nominal".
std::string stability_csv(const experiments::StabilityReport& r);
std::string scaling_csv(const experiments::ScalingReport& r);
/// Mean test MAE or Pearson r as a train × eval matrix with labelled axes.
std::string transfer_csv(const experiments::TransferReport& r, bool pearson);

}  // namespace covnet::reports
