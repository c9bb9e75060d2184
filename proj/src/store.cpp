// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/bundle.hpp>
#include <capassist/errors.hpp>
#include <capassist/json_io.hpp>
#include <capassist/store.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <unistd.h>

namespace capassist {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<std::string> Store::get_asset(std::string_view, std::string_view) const {
    return std::nullopt;
}

// ---------------------------------------------------------------------------

void MemoryStore::put_document(const Document &doc) {
    std::unique_lock lock(mutex_);
    documents_.insert_or_assign(doc.doc_id, doc);
}

std::optional<Document> MemoryStore::get_document(std::string_view doc_id) const {
    std::shared_lock lock(mutex_);
    auto it = documents_.find(doc_id);
    if(it == documents_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> MemoryStore::list_doc_ids() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> ids;
    for(const auto &[id, doc] : documents_) {
        ids.push_back(id);
    }
    return ids;
}

void MemoryStore::put_session(const CaptionSession &session) {
    std::unique_lock lock(mutex_);
    sessions_.insert_or_assign({session.doc_id, session.figure_id}, session);
}

std::optional<CaptionSession> MemoryStore::get_session(std::string_view doc_id,
                                                       std::string_view figure_id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find({std::string(doc_id), std::string(figure_id)});
    if(it == sessions_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void MemoryStore::put_snapshots(std::string_view doc_id, const SnapshotMap &snapshots) {
    std::unique_lock lock(mutex_);
    snapshots_.insert_or_assign(std::string(doc_id), snapshots);
}

std::optional<SnapshotMap> MemoryStore::get_snapshots(std::string_view doc_id) const {
    std::shared_lock lock(mutex_);
    auto it = snapshots_.find(doc_id);
    if(it == snapshots_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void MemoryStore::put_asset(std::string_view doc_id, std::string_view name, std::string bytes) {
    std::unique_lock lock(mutex_);
    assets_.insert_or_assign({std::string(doc_id), std::string(name)}, std::move(bytes));
}

std::optional<std::string> MemoryStore::get_asset(std::string_view doc_id, std::string_view name) const {
    std::shared_lock lock(mutex_);
    auto it = assets_.find({std::string(doc_id), std::string(name)});
    if(it == assets_.end()) {
        return std::nullopt;
    }
    return it->second;
}

// ---------------------------------------------------------------------------

std::string encode_path_component(std::string_view s) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for(std::size_t i = 0; i < s.size(); ++i) {
        const auto c = static_cast<unsigned char>(s[i]);
        const bool plain = std::isalnum(c) || c == '_' || c == '-' || (c == '.' && i > 0);
        if(plain) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::string decode_path_component(std::string_view s) {
    std::string out;
    for(std::size_t i = 0; i < s.size(); ++i) {
        if(s[i] == '%' && i + 2 < s.size()) {
            out.push_back(static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16)));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

namespace {

json snapshot_to_json(const FigureSnapshot &s) {
    return json{{"report", s.report ? json(*s.report) : json(nullptr)},
                {"rating", s.rating ? json(*s.rating) : json(nullptr)},
                {"generated", s.generated}};
}

FigureSnapshot snapshot_from_json(const json &j) {
    FigureSnapshot s;
    if(!j.at("report").is_null()) {
        s.report = j["report"].get<AspectReport>();
    }
    if(!j.at("rating").is_null()) {
        s.rating = j["rating"].get<CaptionRating>();
    }
    s.generated = j.at("generated").get<CaptionPair>();
    return s;
}

std::optional<std::string> read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    if(!in) {
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if(in.bad()) {
        throw Error(ErrorCode::storage_error, "read failed", p.string());
    }
    return ss.str();
}

[[noreturn]] void fail_errno(const std::string &what, const fs::path &p) {
    throw Error(ErrorCode::storage_error, what + ": " + std::strerror(errno), p.string());
}

void write_atomic(const fs::path &target, std::string_view bytes) {
    static std::atomic<unsigned long> counter{0};
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if(ec) {
        throw Error(ErrorCode::storage_error, "cannot create directory: " + ec.message(),
                    target.parent_path().string());
    }
    std::ostringstream name;
    name << '.' << target.filename().string() << ".tmp." << ::getpid() << '.'
         << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << counter++;
    const auto tmp = target.parent_path() / name.str();

    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if(fd < 0) {
        fail_errno("open", tmp);
    }
    std::size_t off = 0;
    while(off < bytes.size()) {
        const auto n = ::write(fd, bytes.data() + off, bytes.size() - off);
        if(n < 0) {
            if(errno == EINTR) {
                continue;
            }
            ::close(fd);
            ::unlink(tmp.c_str());
            fail_errno("write", tmp);
        }
        off += static_cast<std::size_t>(n);
    }
    if(::fsync(fd) != 0 || ::close(fd) != 0) {
        ::unlink(tmp.c_str());
        fail_errno("fsync", tmp);
    }
    if(::rename(tmp.c_str(), target.c_str()) != 0) {
        ::unlink(tmp.c_str());
        fail_errno("rename", target);
    }
}

json parse_stored(const std::string &bytes, const fs::path &p) {
    try {
        return json::parse(bytes);
    } catch(const json::exception &e) {
        throw Error(ErrorCode::storage_error, std::string("corrupt stored file: ") + e.what(), p.string());
    }
}

} // namespace

FileStore::FileStore(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_ / "docs", ec);
    if(ec) {
        throw Error(ErrorCode::storage_error, "cannot create store root: " + ec.message(), root_.string());
    }
}

fs::path FileStore::doc_dir(std::string_view doc_id) const {
    return root_ / "docs" / encode_path_component(doc_id);
}

void FileStore::put_document(const Document &doc) {
    write_atomic(doc_dir(doc.doc_id) / "document.json", serialize_bundle(doc));
}

std::optional<Document> FileStore::get_document(std::string_view doc_id) const {
    const auto p = doc_dir(doc_id) / "document.json";
    auto bytes = read_file(p);
    if(!bytes) {
        return std::nullopt;
    }
    try {
        return parse_bundle(*bytes);
    } catch(const Error &e) {
        throw Error(ErrorCode::storage_error, std::string("corrupt stored document: ") + e.what(), p.string());
    }
}

std::vector<std::string> FileStore::list_doc_ids() const {
    std::vector<std::string> ids;
    std::error_code ec;
    for(const auto &entry : fs::directory_iterator(root_ / "docs", ec)) {
        if(entry.is_directory() && fs::exists(entry.path() / "document.json")) {
            ids.push_back(decode_path_component(entry.path().filename().string()));
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void FileStore::put_session(const CaptionSession &session) {
    write_atomic(doc_dir(session.doc_id) / "sessions" / (encode_path_component(session.figure_id) + ".json"),
                 json(session).dump(2));
}

std::optional<CaptionSession> FileStore::get_session(std::string_view doc_id,
                                                     std::string_view figure_id) const {
    const auto p = doc_dir(doc_id) / "sessions" / (encode_path_component(figure_id) + ".json");
    auto bytes = read_file(p);
    if(!bytes) {
        return std::nullopt;
    }
    try {
        return parse_stored(*bytes, p).get<CaptionSession>();
    } catch(const json::exception &e) {
        throw Error(ErrorCode::storage_error, std::string("corrupt stored session: ") + e.what(), p.string());
    }
}

void FileStore::put_snapshots(std::string_view doc_id, const SnapshotMap &snapshots) {
    json j = json::object();
    for(const auto &[id, s] : snapshots) {
        j[id] = snapshot_to_json(s);
    }
    write_atomic(doc_dir(doc_id) / "snapshots.json", j.dump(2));
}

std::optional<SnapshotMap> FileStore::get_snapshots(std::string_view doc_id) const {
    const auto p = doc_dir(doc_id) / "snapshots.json";
    auto bytes = read_file(p);
    if(!bytes) {
        return std::nullopt;
    }
    try {
        const auto root = parse_stored(*bytes, p);
        SnapshotMap out;
        for(const auto &[id, s] : root.items()) {
            out.emplace(id, snapshot_from_json(s));
        }
        return out;
    } catch(const json::exception &e) {
        throw Error(ErrorCode::storage_error, std::string("corrupt stored snapshots: ") + e.what(), p.string());
    }
}

std::optional<std::string> FileStore::get_asset(std::string_view doc_id, std::string_view name) const {
    if(name.empty()) {
        return std::nullopt;
    }
    return read_file(doc_dir(doc_id) / "assets" / encode_path_component(name));
}

} // namespace capassist
