// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/bundle.hpp>
#include <capassist/errors.hpp>
#include <capassist/figure_id.hpp>
#include <capassist/json_io.hpp>
#include <capassist/service.hpp>
#include <capassist/text.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace capassist {

using nlohmann::json;

std::optional<UploadFormat> upload_format_from_string(std::string_view s) {
    if(s == "pdf") {
        return UploadFormat::pdf;
    }
    if(s == "bundle") {
        return UploadFormat::bundle;
    }
    return std::nullopt;
}

namespace {

// Tries the hosted generator, then the local one.
class FallbackGenerationBackend final : public GenerationBackend {
public:
    FallbackGenerationBackend(std::shared_ptr<const GenerationBackend> primary,
                              std::shared_ptr<const GenerationBackend> fallback)
        : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

    std::string generate(const GenerationRequest &request) const override {
        try {
            return primary_->generate(request);
        } catch(const std::exception &) {
            return fallback_->generate(request);
        }
    }
    std::string backend_id() const override { return primary_->backend_id(); }

private:
    std::shared_ptr<const GenerationBackend> primary_;
    std::shared_ptr<const GenerationBackend> fallback_;
};

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

// Strictly increasing within a session so "latest" is unambiguous.
std::int64_t next_timestamp(const CaptionSession &s) {
    std::int64_t last = 0;
    if(!s.drafts.empty()) {
        last = std::max(last, s.drafts.back().timestamp_ms);
    }
    if(!s.evaluations.empty()) {
        last = std::max(last, s.evaluations.back().timestamp_ms);
    }
    return std::max(now_ms(), last + 1);
}

std::string current_caption(const CaptionSession &s, const FigureRecord &fig) {
    const Draft *d = s.drafts.empty() ? nullptr : &s.drafts.back();
    const Evaluation *e = s.evaluations.empty() ? nullptr : &s.evaluations.back();
    if(d && (!e || d->timestamp_ms > e->timestamp_ms)) {
        return d->caption;
    }
    if(e) {
        return e->caption;
    }
    return fig.caption;
}

std::string canonical_or_not_found(std::string_view figure_id) {
    try {
        return normalize_figure_id(figure_id);
    } catch(const Error &) {
        throw Error(ErrorCode::not_found, "figure not found", std::string(figure_id));
    }
}

} // namespace

ServiceBackends ServiceBackends::offline() {
    ServiceBackends b;
    b.extractor = std::make_shared<FixtureTextExtractor>();
    b.aspects = std::make_shared<RuleAspectBackend>();
    b.rating = std::make_shared<HeuristicRatingBackend>();
    auto extractive = std::make_shared<ExtractiveBackend>();
    b.long_generator = extractive;
    b.short_generator = extractive;
    b.prompt = std::make_shared<PromptTemplate>(PromptTemplate::builtin());
    return b;
}

struct Service::Loaded {
    Document document; // linked
    MentionIndex index;
    std::optional<SnapshotMap> snapshots;
};

Service::Service(std::shared_ptr<Store> store, ServiceBackends backends, ServiceConfig config)
    : store_(std::move(store)), backends_(std::move(backends)), config_(config) {
    if(!store_) {
        throw Error(ErrorCode::invalid_argument, "service requires a store");
    }
    if(!backends_.extractor || !backends_.aspects || !backends_.rating || !backends_.long_generator ||
       !backends_.short_generator) {
        throw Error(ErrorCode::invalid_argument, "service backends are incomplete");
    }
    if(!backends_.prompt) {
        backends_.prompt = std::make_shared<PromptTemplate>(PromptTemplate::builtin());
    }
    if(config_.evaluation_limit < 0) {
        throw Error(ErrorCode::invalid_argument, "evaluation_limit must be >= 0");
    }
}

Service::~Service() = default;

CaptionRater Service::rater() const {
    return CaptionRater(*backends_.aspects, *backends_.rating, backends_.aspect_fallback.get(),
                        backends_.rating_fallback.get(), *backends_.prompt);
}

SnapshotMap Service::compute_snapshots(const Document &doc, const MentionIndex &index) const {
    SnapshotMap out;
    const auto r = rater();
    for(const auto &fig : doc.figures) {
        const auto paras = mention_paragraphs(doc, index, fig.id);
        FigureSnapshot snap;
        if(!text::trim(fig.caption).empty()) {
            try {
                auto res = r.evaluate(fig.caption, fig, paras);
                snap.report = std::move(res.report);
                snap.rating = std::move(res.rating);
            } catch(const Error &) {
                // Leave the original caption unrated; user evaluations still work.
            }
        }
        snap.generated = generate_pair_with_ratings(
            fig, paras, GenerationBackends{*backends_.long_generator, *backends_.short_generator}, r,
            config_.decode);
        out.emplace(fig.id, std::move(snap));
    }
    return out;
}

CreateResult Service::create_document(std::string_view upload, UploadFormat format, const IngestMeta &meta) {
    if(upload.size() > config_.max_upload_bytes) {
        throw Error(ErrorCode::payload_too_large, "upload exceeds the size limit",
                    std::to_string(upload.size()) + " > " + std::to_string(config_.max_upload_bytes));
    }

    CreateResult result;
    Document doc;
    if(format == UploadFormat::pdf) {
        auto ingested = build_document(upload, *backends_.extractor, meta);
        doc = std::move(ingested.document);
        result.warnings = std::move(ingested.warnings);
    } else {
        auto parsed = parse_bundle_with_summary(upload);
        doc = std::move(parsed.document);
        if(parsed.summary.tables_dropped > 0) {
            result.warnings.push_back(std::to_string(parsed.summary.tables_dropped) +
                                      " table caption(s) excluded");
        }
        if(!meta.doc_id.empty()) {
            doc.doc_id = meta.doc_id;
        }
    }
    if(doc.doc_id.empty()) {
        throw ValidationError("doc_id must not be empty", "/doc_id");
    }
    for(auto &p : doc.paragraphs) {
        p.mentions.clear();
    }

    std::lock_guard create_lock(create_mutex_);
    if(auto existing = store_->get_document(doc.doc_id)) {
        if(existing->source_digest != doc.source_digest) {
            throw Error(ErrorCode::conflict, "a different document is stored under this doc_id", doc.doc_id);
        }
        result.doc_id = existing->doc_id;
        result.figure_count = existing->figures.size();
        result.created = false;
        return result;
    }

    auto loaded = std::make_shared<Loaded>();
    loaded->document = doc;
    loaded->index = link_paragraphs(loaded->document);
    if(config_.eager_snapshots) {
        loaded->snapshots = compute_snapshots(loaded->document, loaded->index);
    }

    store_->put_document(doc);
    if(loaded->snapshots) {
        store_->put_snapshots(doc.doc_id, *loaded->snapshots);
    }
    {
        std::unique_lock lock(cache_mutex_);
        cache_.insert_or_assign(doc.doc_id, loaded);
    }
    result.doc_id = doc.doc_id;
    result.figure_count = doc.figures.size();
    return result;
}

std::shared_ptr<const Service::Loaded> Service::load(std::string_view doc_id) const {
    {
        std::shared_lock lock(cache_mutex_);
        auto it = cache_.find(doc_id);
        if(it != cache_.end()) {
            return it->second;
        }
    }
    auto doc = store_->get_document(doc_id);
    if(!doc) {
        throw Error(ErrorCode::not_found, "document not found", std::string(doc_id));
    }
    auto loaded = std::make_shared<Loaded>();
    loaded->document = std::move(*doc);
    loaded->index = link_paragraphs(loaded->document);
    loaded->snapshots = store_->get_snapshots(doc_id);

    std::unique_lock lock(cache_mutex_);
    auto [it, inserted] = cache_.emplace(std::string(doc_id), loaded);
    return it->second;
}

const FigureRecord &Service::require_figure(const Loaded &loaded, std::string_view figure_id) const {
    const auto *fig = loaded.document.find_figure(canonical_or_not_found(figure_id));
    if(fig == nullptr) {
        throw Error(ErrorCode::not_found, "figure not found",
                    loaded.document.doc_id + "/" + std::string(figure_id));
    }
    return *fig;
}

FigureSnapshot Service::snapshot_for(const Loaded &loaded, const std::string &figure_id) const {
    if(loaded.snapshots) {
        auto it = loaded.snapshots->find(figure_id);
        return it == loaded.snapshots->end() ? FigureSnapshot{} : it->second;
    }
    // Lazy mode: compute once, then swap in a new immutable snapshot.
    std::lock_guard lock(lazy_mutex_);
    std::shared_ptr<const Loaded> current;
    {
        std::shared_lock cl(cache_mutex_);
        current = cache_.at(loaded.document.doc_id);
    }
    if(!current->snapshots) {
        auto next = std::make_shared<Loaded>(*current);
        next->snapshots = compute_snapshots(next->document, next->index);
        std::unique_lock cl(cache_mutex_);
        cache_.insert_or_assign(next->document.doc_id, next);
        current = next;
    }
    auto it = current->snapshots->find(figure_id);
    return it == current->snapshots->end() ? FigureSnapshot{} : it->second;
}

std::mutex &Service::session_mutex(const std::string &doc_id, const std::string &figure_id) {
    std::lock_guard lock(locks_mutex_);
    auto &slot = session_locks_[{doc_id, figure_id}];
    if(!slot) {
        slot = std::make_unique<std::mutex>();
    }
    return *slot;
}

CaptionSession Service::current_session(const std::string &doc_id, const std::string &figure_id) const {
    auto s = store_->get_session(doc_id, figure_id);
    if(!s) {
        s = CaptionSession{};
        s->doc_id = doc_id;
        s->figure_id = figure_id;
    }
    s->evaluation_limit = config_.evaluation_limit;
    return *s;
}

SessionSummary Service::summarize(const CaptionSession &session) const {
    SessionSummary out;
    out.evaluations_used = session.evaluation_count();
    out.evaluation_limit = session.evaluation_limit;
    out.remaining = std::max(0, session.remaining());
    out.drafts = session.drafts.size();
    return out;
}

std::vector<FigureSummary> Service::list_figures(std::string_view doc_id) const {
    const auto loaded = load(doc_id);
    const auto &doc = loaded->document;
    std::vector<const FigureRecord *> figs;
    for(const auto &f : doc.figures) {
        figs.push_back(&f);
    }
    std::stable_sort(figs.begin(), figs.end(),
                     [](const FigureRecord *a, const FigureRecord *b) { return a->page < b->page; });

    std::vector<FigureSummary> out;
    for(const auto *f : figs) {
        FigureSummary s;
        s.id = f->id;
        s.page = f->page;
        const auto session = store_->get_session(doc.doc_id, f->id);
        s.caption = session ? current_caption(*session, *f) : f->caption;
        if(session && !session->evaluations.empty()) {
            s.score = session->evaluations.back().rating.score;
        } else if(loaded->snapshots) {
            auto it = loaded->snapshots->find(f->id);
            if(it != loaded->snapshots->end() && it->second.rating) {
                s.score = it->second.rating->score;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

FigureDetail Service::get_figure_detail(std::string_view doc_id, std::string_view figure_id) const {
    const auto loaded = load(doc_id);
    const auto &fig = require_figure(*loaded, figure_id);
    const auto session = current_session(loaded->document.doc_id, fig.id);
    const auto snap = snapshot_for(*loaded, fig.id);

    FigureDetail d;
    d.figure = fig;
    d.current_caption = current_caption(session, fig);
    d.mention_paragraphs = mention_paragraphs(loaded->document, loaded->index, fig.id);
    d.aspect_report = rater().analyze(d.current_caption, fig, d.mention_paragraphs);
    if(!session.evaluations.empty()) {
        d.rating = session.evaluations.back().rating;
    } else {
        d.rating = snap.rating;
    }
    d.generated = snap.generated;
    d.session = summarize(session);
    return d;
}

DraftResult Service::save_draft(std::string_view doc_id, std::string_view figure_id, std::string caption) {
    const auto loaded = load(doc_id);
    const auto &fig = require_figure(*loaded, figure_id);

    std::lock_guard lock(session_mutex(loaded->document.doc_id, fig.id));
    auto session = current_session(loaded->document.doc_id, fig.id);
    DraftResult out;
    out.empty_caption = text::trim(caption).empty();
    session.drafts.push_back(Draft{std::move(caption), next_timestamp(session)});
    store_->put_session(session);
    out.session = summarize(session);
    return out;
}

EvaluationResult Service::evaluate_caption(std::string_view doc_id, std::string_view figure_id,
                                           std::string caption) {
    const auto loaded = load(doc_id);
    const auto &fig = require_figure(*loaded, figure_id);
    if(text::trim(caption).empty()) {
        throw Error(ErrorCode::empty_caption, "caption is empty");
    }

    std::lock_guard lock(session_mutex(loaded->document.doc_id, fig.id));
    auto session = current_session(loaded->document.doc_id, fig.id);
    if(session.evaluation_count() >= session.evaluation_limit) {
        throw Error(ErrorCode::submission_limit_reached, "submission limit reached",
                    std::to_string(session.evaluation_count()) + "/" +
                        std::to_string(session.evaluation_limit));
    }

    const auto paras = mention_paragraphs(loaded->document, loaded->index, fig.id);
    auto res = rater().evaluate(caption, fig, paras);

    Evaluation ev;
    ev.caption = std::move(caption);
    ev.report = res.report;
    ev.rating = res.rating;
    ev.timestamp_ms = next_timestamp(session);
    session.evaluations.push_back(std::move(ev));
    store_->put_session(session);

    return EvaluationResult{std::move(res.report), std::move(res.rating), summarize(session)};
}

MentionIndex Service::mention_index(std::string_view doc_id) const { return load(doc_id)->index; }

std::optional<std::string> Service::figure_image(std::string_view doc_id, std::string_view figure_id) const {
    const auto loaded = load(doc_id);
    const auto &fig = require_figure(*loaded, figure_id);
    if(!fig.image_ref) {
        return std::nullopt;
    }
    return store_->get_asset(loaded->document.doc_id, *fig.image_ref);
}

// ---------------------------------------------------------------------------

json to_json(const SessionSummary &s) {
    return json{{"evaluations_used", s.evaluations_used},
                {"evaluation_limit", s.evaluation_limit},
                {"remaining", s.remaining},
                {"drafts", s.drafts}};
}

json to_json(const CreateResult &r) {
    return json{{"doc_id", r.doc_id}, {"figure_count", r.figure_count}, {"warnings", r.warnings},
                {"created", r.created}};
}

json to_json(const FigureSummary &f) {
    return json{{"id", f.id}, {"page", f.page}, {"caption", f.caption},
                {"score", f.score ? json(*f.score) : json(nullptr)}};
}

json to_json(const FigureDetail &d) {
    json paras = json::array();
    for(const auto &p : d.mention_paragraphs) {
        paras.push_back(p);
    }
    return json{{"figure", d.figure},
                {"current_caption", d.current_caption},
                {"aspect_report", d.aspect_report},
                {"rating", d.rating ? json(*d.rating) : json(nullptr)},
                {"generated", d.generated},
                {"mention_paragraphs", paras},
                {"session", to_json(d.session)}};
}

json to_json(const DraftResult &r) {
    return json{{"session", to_json(r.session)}, {"empty_caption", r.empty_caption}};
}

json to_json(const EvaluationResult &r) {
    return json{{"aspect_report", r.report}, {"rating", r.rating}, {"session", to_json(r.session)}};
}

int http_status(ErrorCode code) {
    switch(code) {
    case ErrorCode::parse_error:
    case ErrorCode::validation_error:
    case ErrorCode::empty_caption:
    case ErrorCode::invalid_argument:
    case ErrorCode::degenerate_sample:
        return 400;
    case ErrorCode::ingest_error:
        return 422;
    case ErrorCode::not_found:
        return 404;
    case ErrorCode::conflict:
    case ErrorCode::submission_limit_reached:
        return 409;
    case ErrorCode::payload_too_large:
        return 413;
    case ErrorCode::analysis_error:
    case ErrorCode::rating_error:
    case ErrorCode::generation_error:
    case ErrorCode::transport_error:
        return 502;
    case ErrorCode::storage_error:
        return 500;
    }
    return 500;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::string> env(const char *name) {
    const char *v = std::getenv(name);
    if(v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

long long env_integer(const char *name, long long fallback) {
    auto v = env(name);
    if(!v) {
        return fallback;
    }
    try {
        std::size_t used = 0;
        const auto n = std::stoll(*v, &used);
        if(used != v->size()) {
            throw std::invalid_argument(*v);
        }
        return n;
    } catch(const std::exception &) {
        throw Error(ErrorCode::invalid_argument, std::string("environment variable is not an integer"),
                    std::string(name) + "=" + *v);
    }
}

} // namespace

ServerSettings ServerSettings::from_json(const json &j) {
    ServerSettings s;
    try {
        s.host = j.value("host", s.host);
        s.port = j.value("port", s.port);
        s.storage = j.value("storage", std::string{});
        s.service.evaluation_limit = j.value("evaluation_limit", s.service.evaluation_limit);
        s.service.max_upload_bytes = j.value("max_upload_bytes", s.service.max_upload_bytes);
        s.service.eager_snapshots = j.value("eager_snapshots", s.service.eager_snapshots);
        s.service.decode.num_beams = j.value("num_beams", s.service.decode.num_beams);
        if(j.contains("max_words") && !j["max_words"].is_null()) {
            s.service.decode.max_words = j["max_words"].get<std::size_t>();
        }
        if(j.contains("rating")) {
            const auto &r = j["rating"];
            s.rating_backend = r.value("backend", s.rating_backend);
            s.hosted_rating.endpoint = r.value("endpoint", s.hosted_rating.endpoint);
            s.hosted_rating.model = r.value("model", s.hosted_rating.model);
            s.hosted_rating.api_key = r.value("api_key", s.hosted_rating.api_key);
            s.hosted_rating.timeout =
                std::chrono::milliseconds(r.value("timeout_ms", s.hosted_rating.timeout.count()));
            s.hosted_rating.max_in_flight = r.value("max_in_flight", s.hosted_rating.max_in_flight);
        }
        s.aspect_endpoint = j.value("aspect_endpoint", std::string{});
        s.generation_endpoint = j.value("generation_endpoint", std::string{});
    } catch(const json::exception &e) {
        throw Error(ErrorCode::validation_error, std::string("invalid settings: ") + e.what());
    }
    return s;
}

ServerSettings ServerSettings::load(const std::optional<std::filesystem::path> &file) {
    ServerSettings s;
    if(file) {
        std::ifstream in(*file);
        if(!in) {
            throw Error(ErrorCode::not_found, "cannot open settings file", file->string());
        }
        std::stringstream ss;
        ss << in.rdbuf();
        json j;
        try {
            j = json::parse(ss.str());
        } catch(const json::parse_error &e) {
            throw ParseError(std::string("settings file is not JSON: ") + e.what(), e.byte);
        }
        s = from_json(j);
    }
    if(auto v = env("CAPASSIST_HOST")) {
        s.host = *v;
    }
    s.port = static_cast<int>(env_integer("CAPASSIST_PORT", s.port));
    if(auto v = env("CAPASSIST_STORAGE")) {
        s.storage = *v;
    }
    s.service.evaluation_limit =
        static_cast<int>(env_integer("CAPASSIST_EVALUATION_LIMIT", s.service.evaluation_limit));
    s.service.max_upload_bytes = static_cast<std::size_t>(
        env_integer("CAPASSIST_MAX_UPLOAD_BYTES", static_cast<long long>(s.service.max_upload_bytes)));
    if(auto v = env("CAPASSIST_RATING_BACKEND")) {
        s.rating_backend = *v;
    }
    if(auto v = env("CAPASSIST_ASPECT_ENDPOINT")) {
        s.aspect_endpoint = *v;
    }
    if(auto v = env("CAPASSIST_GENERATION_ENDPOINT")) {
        s.generation_endpoint = *v;
    }
    s.hosted_rating = HostedChatConfig::from_env(s.hosted_rating);
    if(s.rating_backend != "heuristic" && s.rating_backend != "hosted") {
        throw Error(ErrorCode::invalid_argument, "unknown rating backend", s.rating_backend);
    }
    return s;
}

ServiceBackends make_backends(const ServerSettings &settings) {
    auto b = ServiceBackends::offline();
    if(!settings.aspect_endpoint.empty()) {
        b.aspect_fallback = b.aspects;
        HttpEndpoint endpoint;
        endpoint.url = settings.aspect_endpoint;
        b.aspects = std::make_shared<HttpAspectBackend>(endpoint);
    }
    if(settings.rating_backend == "hosted") {
        b.rating_fallback = b.rating;
        b.rating = std::make_shared<HostedChatBackend>(settings.hosted_rating);
    }
    if(!settings.generation_endpoint.empty()) {
        HttpEndpoint endpoint;
        endpoint.url = settings.generation_endpoint;
        auto hosted = std::make_shared<HostedGenerationBackend>(endpoint);
        auto gen = std::make_shared<FallbackGenerationBackend>(hosted, b.long_generator);
        b.long_generator = gen;
        b.short_generator = gen;
    }
    return b;
}

std::shared_ptr<Store> make_store(const ServerSettings &settings) {
    if(settings.storage.empty()) {
        return std::make_shared<MemoryStore>();
    }
    return std::make_shared<FileStore>(settings.storage);
}

} // namespace capassist
