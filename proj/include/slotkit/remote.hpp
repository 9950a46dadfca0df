#pragma once

#include <memory>
#include <string>

#include "slotkit/pipeline.hpp"

namespace slotkit {

// Environment variable consulted for the bearer token. Unset or empty sends
// no Authorization header.
inline constexpr const char* kApiTokenEnvVar = "SLOTKIT_API_TOKEN";

struct RemoteConfig {
    std::string host = "127.0.0.1";
    int port = 80;
    std::string path = "/v1/ground";
    int timeout_sec = 60;
};

// Parses "host:port" or "host:port/path" into a RemoteConfig. Throws
// ConfigError on a missing or non-numeric port.
RemoteConfig parse_endpoint(const std::string& endpoint);

// The exact prompt sent alongside the head image for an instruction.
std::string grounding_prompt(const std::string& instruction_text);

// Backend that POSTs {image: base64 PNG, prompt} to the endpoint and expects
// {image: base64 PNG} back, same dimensions as the input. Requests are
// single-flight: concurrent ground() calls queue on an internal lock.
//
// Errors: TransportError (no response), BackendRefusal (non-200 status or a
// body that is not a JSON document with a decodable image), DimensionMismatch
// (edited image resized relative to the input).
std::unique_ptr<GroundingBackend> remote_backend(const RemoteConfig& config);

}  // namespace slotkit
