#pragma once

/**
 * @file certificate_io.hpp
 * @brief Parsing side of the certificate JSON format.
 *
 * Kept out of bounds.hpp so the JSON dependency is only paid where
 * certificates are actually read back.
 */

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "psl2z/bounds.hpp"

namespace psl2z {

/// Inverse of certificate_to_json. Rejects documents with missing or
/// ill-typed fields; value-level validation is recheck_certificate's job.
inline BoundCertificate certificate_from_json(std::string const& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (nlohmann::json::exception const& e) {
    throw std::invalid_argument(std::string("certificate is not valid JSON: ") +
                                e.what());
  }
  try {
    BoundCertificate cert;
    auto c = doc.at("c").get<std::vector<double>>();
    auto f = doc.at("f").get<std::vector<double>>();
    if (c.size() != 5 || f.size() != 6)
      throw std::invalid_argument(
          "certificate needs 5 valuation entries and 6 row sums");
    cert.c = Valuation{c[0], c[1], c[2], c[3], c[4]};
    std::copy(f.begin(), f.end(), cert.f.begin());
    cert.max_f = doc.at("max_f").get<double>();
    cert.lower_bound = doc.at("lower_bound").get<double>();
    cert.seed = doc.at("seed").get<std::uint64_t>();
    cert.tolerance = doc.at("tolerance").get<double>();
    return cert;
  } catch (nlohmann::json::exception const& e) {
    throw std::invalid_argument(std::string("certificate field error: ") +
                                e.what());
  }
}

}  // namespace psl2z
