#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace promptsteal {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

// Text-to-vector backend. Implementations must be deterministic for a fixed
// backend and text, emit a fixed dimensionality, and tolerate concurrent calls.
class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;

    // Throws EmptyText for an empty input.
    virtual EmbeddingVector embed(const std::string& text) = 0;
    virtual std::size_t dim() const = 0;
    virtual std::string id() const = 0;
};

// Deterministic bag-of-tokens embedding used by the offline test suite.
// Scheme (fixed; tests reimplement it as an oracle):
//   tokens = lowercased maximal [a-z0-9] runs
//   values[fnv1a64(token) % 256] += 1.0
// Term counts are left L2-unnormalized; cosine normalizes anyway.
class HashEmbeddingBackend final : public EmbeddingBackend {
public:
    static constexpr std::size_t kDim = 256;

    EmbeddingVector embed(const std::string& text) override;
    std::size_t dim() const override { return kDim; }
    std::string id() const override { return "hash_test"; }
};

// Serves embeddings from a JSONL file of {"text": ..., "vector": [...]}.
// Lets live-model embeddings be precomputed once and replayed offline.
class LookupEmbeddingBackend final : public EmbeddingBackend {
public:
    explicit LookupEmbeddingBackend(const std::filesystem::path& path);

    EmbeddingVector embed(const std::string& text) override;
    std::size_t dim() const override { return dim_; }
    std::string id() const override { return "local:" + path_; }

private:
    std::string path_;
    std::size_t dim_ = 0;
    std::map<std::string, std::vector<double>> table_;
};

// HTTP adapter: POST {"texts": [text]} -> {"embeddings": [[...]]}.
// The wire schema is isolated here; credentials come from an env var.
class RemoteEmbeddingBackend final : public EmbeddingBackend {
public:
    RemoteEmbeddingBackend(std::string endpoint, std::optional<std::string> credentials_env);

    EmbeddingVector embed(const std::string& text) override;
    std::size_t dim() const override { return dim_; }
    std::string id() const override { return "remote:" + endpoint_; }

private:
    std::string endpoint_;
    std::optional<std::string> credentials_env_;
    std::size_t dim_ = 0;  // learned from the first response
    std::mutex mutex_;
};

// Config key embedding.backend: "hash_test" | {"backend":"local","path":...} |
// {"backend":"remote","endpoint":...,"credentials_env":...}.
std::unique_ptr<EmbeddingBackend> make_embedding_backend(const nlohmann::json& config);

// (a . b) / (|a| |b|). Throws DimensionMismatch or ZeroVector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// cosine(embed(x), embed(y)).
double text_similarity(EmbeddingBackend& backend, const std::string& x, const std::string& y);

}  // namespace promptsteal
