#pragma once

#include "muderiv/fourier_mu.hpp"

#include "json.hpp"

#include <string>

namespace muderiv {

nlohmann::json hypotheses_json(const Hypotheses& h);
nlohmann::json roots_json(const RootNumberData& r);
nlohmann::json ledger_json(const RhsResult& r);
nlohmann::json witness_json(const Witness& w);
nlohmann::json certificate_json(const MuCertificate& c);
// certificate for a run stopped at a hypothesis gate
nlohmann::json refusal_json(const GlobalHeckeChar& lam, long p, const Hypotheses& h, const HypothesisError& err);

std::string dump_certificate(const nlohmann::json& j);
void write_certificate(const nlohmann::json& j, const std::string& path);

}  // namespace muderiv
