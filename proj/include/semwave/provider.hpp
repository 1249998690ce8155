#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "semwave/embedding.hpp"

namespace semwave {

// Generic JSON-over-HTTP embedding provider. Request body:
//   {"model": <name>, "input": [<texts>...]}
// Response: {"embeddings": [[...]...]} or OpenAI-style
//   {"data": [{"embedding": [...]}...]}.
struct ProviderConfig {
    std::string endpoint;        // e.g. http://localhost:8080/v1/embeddings
    std::string model;
    std::string credential_env;  // env var holding the bearer token; empty = none
    std::size_t max_in_flight = 4;
    std::filesystem::path cache_dir;
    std::size_t batch_size = 64;
    int max_retries = 3;
    int backoff_base_ms = 100;

    void validate() const;
};

struct FetchStats {
    std::size_t requests = 0;   // HTTP requests actually issued
    std::size_t cache_hits = 0; // tokens served from the on-disk cache
};

// One vector per distinct token; cache keyed by SHA-256(model, token).
EmbeddingSet fetch_embeddings(const ProviderConfig& config,
                              const std::vector<std::string>& tokens,
                              FetchStats* stats = nullptr);

// Cache file name for a (model, token) pair: <sha256 hex>.json
std::string cache_key(const std::string& model, const std::string& token);

} // namespace semwave
