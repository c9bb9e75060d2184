// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/generation.hpp>
#include <capassist/model.hpp>

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

// Values computed once when a document is created and reused afterwards.
struct FigureSnapshot {
    std::optional<AspectReport> report; // of the original caption
    std::optional<CaptionRating> rating;
    CaptionPair generated;
};

using SnapshotMap = std::map<std::string, FigureSnapshot, std::less<>>;

// Persistence for documents and caption sessions. Every put is atomic per key
// and visible to later gets. Implementations are safe for concurrent use.
// Failures throw Error(storage_error).
class Store {
public:
    virtual ~Store() = default;

    virtual void put_document(const Document &doc) = 0;
    virtual std::optional<Document> get_document(std::string_view doc_id) const = 0;
    virtual std::vector<std::string> list_doc_ids() const = 0;

    virtual void put_session(const CaptionSession &session) = 0;
    virtual std::optional<CaptionSession> get_session(std::string_view doc_id,
                                                      std::string_view figure_id) const = 0;

    virtual void put_snapshots(std::string_view doc_id, const SnapshotMap &snapshots) = 0;
    virtual std::optional<SnapshotMap> get_snapshots(std::string_view doc_id) const = 0;

    // Raw bytes of a stored figure image, looked up by image_ref.
    virtual std::optional<std::string> get_asset(std::string_view doc_id, std::string_view name) const;
};

class MemoryStore final : public Store {
public:
    void put_document(const Document &doc) override;
    std::optional<Document> get_document(std::string_view doc_id) const override;
    std::vector<std::string> list_doc_ids() const override;

    void put_session(const CaptionSession &session) override;
    std::optional<CaptionSession> get_session(std::string_view doc_id,
                                              std::string_view figure_id) const override;

    void put_snapshots(std::string_view doc_id, const SnapshotMap &snapshots) override;
    std::optional<SnapshotMap> get_snapshots(std::string_view doc_id) const override;

    void put_asset(std::string_view doc_id, std::string_view name, std::string bytes);
    std::optional<std::string> get_asset(std::string_view doc_id, std::string_view name) const override;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, Document, std::less<>> documents_;
    std::map<std::pair<std::string, std::string>, CaptionSession> sessions_;
    std::map<std::string, SnapshotMap, std::less<>> snapshots_;
    std::map<std::pair<std::string, std::string>, std::string> assets_;
};

// JSON files under a root directory:
//
//   <root>/docs/<doc>/document.json        bundle format
//   <root>/docs/<doc>/snapshots.json
//   <root>/docs/<doc>/sessions/<fig>.json
//   <root>/docs/<doc>/assets/<name>        figure images (read only)
//
// Path components are percent-encoded. Each write goes to a temporary file
// in the target directory and is renamed over the destination.
class FileStore final : public Store {
public:
    explicit FileStore(std::filesystem::path root);

    void put_document(const Document &doc) override;
    std::optional<Document> get_document(std::string_view doc_id) const override;
    std::vector<std::string> list_doc_ids() const override;

    void put_session(const CaptionSession &session) override;
    std::optional<CaptionSession> get_session(std::string_view doc_id,
                                              std::string_view figure_id) const override;

    void put_snapshots(std::string_view doc_id, const SnapshotMap &snapshots) override;
    std::optional<SnapshotMap> get_snapshots(std::string_view doc_id) const override;

    std::optional<std::string> get_asset(std::string_view doc_id, std::string_view name) const override;

    const std::filesystem::path &root() const { return root_; }

private:
    std::filesystem::path doc_dir(std::string_view doc_id) const;

    std::filesystem::path root_;
};

// Reversible file-name encoding: [A-Za-z0-9_-] and non-leading '.' pass
// through, everything else becomes %XX.
std::string encode_path_component(std::string_view s);
std::string decode_path_component(std::string_view s);

} // namespace capassist
