#pragma once

#include <string>
#include <string_view>

#include "choreo/dynamics.hpp"
#include "choreo/symmetric_loop.hpp"

namespace choreo {

/// {"alpha-independent": {"modes": M, "nc1": bool, "a": [...], "b": [...]}}
std::string loop_to_json(const SymmetricLoop& loop);
/// Throws ConfigError on malformed input or inconsistent lengths.
SymmetricLoop loop_from_json(std::string_view text);

/// Flat object keyed by the OrbitCertificate field names.
std::string certificate_to_json(const OrbitCertificate& cert);
OrbitCertificate certificate_from_json(std::string_view text);

}  // namespace choreo
