// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/aspects.hpp>
#include <capassist/generation.hpp>
#include <capassist/ingest.hpp>
#include <capassist/mentions.hpp>
#include <capassist/model.hpp>
#include <capassist/rating.hpp>
#include <capassist/store.hpp>

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

enum class UploadFormat { pdf, bundle };

std::optional<UploadFormat> upload_format_from_string(std::string_view s);

struct ServiceConfig {
    // Evaluations allowed per figure over the life of its session. Raising it
    // in a deployment applies to existing sessions as well.
    int evaluation_limit = default_evaluation_limit;
    std::size_t max_upload_bytes = 32u << 20;
    // Compute the original caption's report, rating, and generated captions at
    // upload time; otherwise on first access (cached in memory only).
    bool eager_snapshots = true;
    DecodeParams decode;
};

struct ServiceBackends {
    std::shared_ptr<const TextExtractor> extractor;
    std::shared_ptr<const AspectBackend> aspects;
    std::shared_ptr<const AspectBackend> aspect_fallback;           // optional
    std::shared_ptr<RatingBackend> rating;
    std::shared_ptr<RatingBackend> rating_fallback;                 // optional
    std::shared_ptr<const GenerationBackend> long_generator;
    std::shared_ptr<const GenerationBackend> short_generator;
    std::shared_ptr<const PromptTemplate> prompt;

    // Fixture extractor, rules, heuristic rating, extractive generation.
    static ServiceBackends offline();
};

struct SessionSummary {
    int evaluations_used = 0;
    int evaluation_limit = default_evaluation_limit;
    int remaining = default_evaluation_limit;
    std::size_t drafts = 0;
};

struct CreateResult {
    std::string doc_id;
    std::size_t figure_count = 0;
    std::vector<std::string> warnings;
    bool created = true; // false when the same upload was already stored
};

struct FigureSummary {
    std::string id;
    int page = 1;
    std::string caption;
    std::optional<int> score;
};

struct FigureDetail {
    FigureRecord figure;
    std::string current_caption;
    AspectReport aspect_report;
    std::optional<CaptionRating> rating;
    CaptionPair generated;
    std::vector<Paragraph> mention_paragraphs;
    SessionSummary session;
};

struct DraftResult {
    SessionSummary session;
    bool empty_caption = false;
};

struct EvaluationResult {
    AspectReport report;
    CaptionRating rating;
    SessionSummary session;
};

// Ties ingest, linking, analysis, rating and generation to a Store.
//
// Documents are immutable once created and are cached as shared snapshots, so
// reads take no per-figure lock. Session writes for one (doc, figure) are
// serialized by a mutex, which keeps evaluation_count <= evaluation_limit
// under any interleaving. All errors are capassist::Error.
class Service {
public:
    Service(std::shared_ptr<Store> store, ServiceBackends backends, ServiceConfig config = {});
    ~Service();

    Service(const Service &) = delete;
    Service &operator=(const Service &) = delete;

    // Same doc_id with the same source digest returns the stored document
    // (created = false); a different digest is a conflict.
    CreateResult create_document(std::string_view upload, UploadFormat format,
                                 const IngestMeta &meta = {});

    std::vector<FigureSummary> list_figures(std::string_view doc_id) const;
    FigureDetail get_figure_detail(std::string_view doc_id, std::string_view figure_id) const;
    DraftResult save_draft(std::string_view doc_id, std::string_view figure_id, std::string caption);
    EvaluationResult evaluate_caption(std::string_view doc_id, std::string_view figure_id,
                                      std::string caption);

    // Mentions computed by the linker for a stored document.
    MentionIndex mention_index(std::string_view doc_id) const;
    // Bytes of the figure's image_ref asset, if the store holds it.
    std::optional<std::string> figure_image(std::string_view doc_id, std::string_view figure_id) const;

    const ServiceConfig &config() const { return config_; }

private:
    struct Loaded;

    std::shared_ptr<const Loaded> load(std::string_view doc_id) const;
    const FigureRecord &require_figure(const Loaded &loaded, std::string_view figure_id) const;
    std::mutex &session_mutex(const std::string &doc_id, const std::string &figure_id);
    CaptionSession current_session(const std::string &doc_id, const std::string &figure_id) const;
    SessionSummary summarize(const CaptionSession &session) const;
    SnapshotMap compute_snapshots(const Document &doc, const MentionIndex &index) const;
    FigureSnapshot snapshot_for(const Loaded &loaded, const std::string &figure_id) const;
    CaptionRater rater() const;

    std::shared_ptr<Store> store_;
    ServiceBackends backends_;
    ServiceConfig config_;

    mutable std::shared_mutex cache_mutex_;
    mutable std::map<std::string, std::shared_ptr<const Loaded>, std::less<>> cache_;
    mutable std::mutex lazy_mutex_;

    std::mutex create_mutex_;
    std::mutex locks_mutex_;
    std::map<std::pair<std::string, std::string>, std::unique_ptr<std::mutex>> session_locks_;
};

// JSON forms used by the HTTP API and the CLI.
nlohmann::json to_json(const SessionSummary &s);
nlohmann::json to_json(const CreateResult &r);
nlohmann::json to_json(const FigureSummary &f);
nlohmann::json to_json(const FigureDetail &d);
nlohmann::json to_json(const DraftResult &r);
nlohmann::json to_json(const EvaluationResult &r);

// HTTP status for an error code (404 not_found, 409 conflict and limit, ...).
int http_status(ErrorCode code);

// ---------------------------------------------------------------------------
// Deployment settings

struct ServerSettings {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path storage; // empty: in-memory store
    ServiceConfig service;

    std::string rating_backend = "heuristic"; // "heuristic" | "hosted"
    HostedChatConfig hosted_rating;
    std::string aspect_endpoint;     // empty: rules only
    std::string generation_endpoint; // empty: extractive only

    // Optional JSON file, then environment overrides:
    //   CAPASSIST_HOST, CAPASSIST_PORT, CAPASSIST_STORAGE,
    //   CAPASSIST_EVALUATION_LIMIT, CAPASSIST_MAX_UPLOAD_BYTES,
    //   CAPASSIST_RATING_BACKEND, CAPASSIST_ASPECT_ENDPOINT,
    //   CAPASSIST_GENERATION_ENDPOINT, and the hosted rating variables.
    static ServerSettings load(const std::optional<std::filesystem::path> &file);
    static ServerSettings from_json(const nlohmann::json &j);
};

// Hosted backends are wrapped with offline fallbacks.
ServiceBackends make_backends(const ServerSettings &settings);
std::shared_ptr<Store> make_store(const ServerSettings &settings);

} // namespace capassist
