// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/errors.hpp>
#include <capassist/http_api.hpp>
#include <capassist/json_io.hpp>

#include <httplib.h>

namespace capassist {

using nlohmann::json;

namespace {

constexpr const char *json_type = "application/json; charset=utf-8";

void send_json(httplib::Response &res, int status, const json &body) {
    res.status = status;
    res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), json_type);
}

void send_error(httplib::Response &res, const Error &e) { send_json(res, http_status(e.code()), error_body(e)); }

std::string caption_from_body(const httplib::Request &req) {
    json body;
    try {
        body = json::parse(req.body);
    } catch(const json::parse_error &e) {
        throw ParseError(std::string("request body is not JSON: ") + e.what(), e.byte);
    }
    if(!body.is_object() || !body.contains("caption")) {
        throw ValidationError("missing required field", "/caption");
    }
    if(!body["caption"].is_string()) {
        throw ValidationError("caption must be a string", "/caption");
    }
    return body["caption"].get<std::string>();
}

bool looks_like_json(std::string_view content_type, std::string_view filename) {
    return content_type.find("json") != std::string_view::npos ||
           (filename.size() >= 5 && filename.substr(filename.size() - 5) == ".json");
}

std::string image_type(std::string_view name) {
    auto ends = [&](std::string_view ext) {
        return name.size() >= ext.size() && name.substr(name.size() - ext.size()) == ext;
    };
    if(ends(".png")) {
        return "image/png";
    }
    if(ends(".jpg") || ends(".jpeg")) {
        return "image/jpeg";
    }
    if(ends(".svg")) {
        return "image/svg+xml";
    }
    if(ends(".gif")) {
        return "image/gif";
    }
    return "application/octet-stream";
}

template <typename F>
auto guarded(F &&handler) {
    return [handler = std::forward<F>(handler)](const httplib::Request &req, httplib::Response &res) {
        try {
            handler(req, res);
        } catch(const Error &e) {
            send_error(res, e);
        } catch(const std::exception &e) {
            send_error(res, Error(ErrorCode::storage_error, "internal error", e.what()));
        }
    };
}

} // namespace

struct HttpApi::Impl {
    Service &service;
    httplib::Server server;

    explicit Impl(Service &s) : service(s) {}

    void routes();
};

void HttpApi::Impl::routes() {
    // Multipart framing adds some overhead above the document itself.
    server.set_payload_max_length(service.config().max_upload_bytes + (64u << 10));

    server.set_error_handler([](const httplib::Request &, httplib::Response &res) {
        if(!res.body.empty()) {
            return;
        }
        if(res.status == 413) {
            send_error(res, Error(ErrorCode::payload_too_large, "upload exceeds the size limit"));
        } else if(res.status == 404) {
            send_error(res, Error(ErrorCode::not_found, "no such route"));
        } else {
            send_json(res, res.status, json{{"code", "http_error"}, {"message", httplib::status_message(res.status)}});
        }
    });

    server.Get("/healthz", [](const httplib::Request &, httplib::Response &res) {
        send_json(res, 200, json{{"status", "ok"}});
    });

    server.Post("/documents", guarded([this](const httplib::Request &req, httplib::Response &res) {
        std::string payload;
        std::string content_type = req.get_header_value("Content-Type");
        std::string filename;
        std::string format_hint = req.get_param_value("format");
        if(req.is_multipart_form_data()) {
            if(!req.has_file("file")) {
                throw ValidationError("multipart upload needs a 'file' part", "/file");
            }
            const auto file = req.get_file_value("file");
            payload = file.content;
            content_type = file.content_type;
            filename = file.filename;
            if(req.has_file("format")) {
                format_hint = req.get_file_value("format").content;
            }
        } else {
            payload = req.body;
        }

        UploadFormat format = looks_like_json(content_type, filename) ? UploadFormat::bundle : UploadFormat::pdf;
        if(!format_hint.empty()) {
            auto f = upload_format_from_string(format_hint);
            if(!f) {
                throw ValidationError("format must be 'pdf' or 'bundle'", "/format");
            }
            format = *f;
        }
        IngestMeta meta;
        meta.doc_id = req.get_param_value("doc_id");
        const auto result = service.create_document(payload, format, meta);
        send_json(res, result.created ? 201 : 200, to_json(result));
    }));

    server.Get(R"(/documents/([^/]+)/figures)", guarded([this](const httplib::Request &req, httplib::Response &res) {
        json out = json::array();
        for(const auto &f : service.list_figures(req.matches[1].str())) {
            out.push_back(to_json(f));
        }
        send_json(res, 200, json{{"doc_id", req.matches[1].str()}, {"figures", out}});
    }));

    server.Get(R"(/documents/([^/]+)/figures/([^/]+))",
               guarded([this](const httplib::Request &req, httplib::Response &res) {
                   send_json(res, 200, to_json(service.get_figure_detail(req.matches[1].str(), req.matches[2].str())));
               }));

    server.Get(R"(/documents/([^/]+)/figures/([^/]+)/image)",
               guarded([this](const httplib::Request &req, httplib::Response &res) {
                   const auto doc = req.matches[1].str();
                   const auto fig = req.matches[2].str();
                   auto bytes = service.figure_image(doc, fig);
                   if(!bytes) {
                       throw Error(ErrorCode::not_found, "figure has no stored image", doc + "/" + fig);
                   }
                   const auto detail = service.get_figure_detail(doc, fig);
                   res.status = 200;
                   res.set_content(*bytes, image_type(detail.figure.image_ref.value_or("")));
               }));

    server.Put(R"(/documents/([^/]+)/figures/([^/]+)/draft)",
               guarded([this](const httplib::Request &req, httplib::Response &res) {
                   auto caption = caption_from_body(req);
                   const auto out = service.save_draft(req.matches[1].str(), req.matches[2].str(), std::move(caption));
                   send_json(res, 200, to_json(out));
               }));

    server.Post(R"(/documents/([^/]+)/figures/([^/]+)/evaluate)",
                guarded([this](const httplib::Request &req, httplib::Response &res) {
                    auto caption = caption_from_body(req);
                    const auto out =
                        service.evaluate_caption(req.matches[1].str(), req.matches[2].str(), std::move(caption));
                    send_json(res, 200, to_json(out));
                }));
}

HttpApi::HttpApi(Service &service) : impl_(std::make_unique<Impl>(service)) { impl_->routes(); }

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind(const std::string &host, int port) {
    if(port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if(bound <= 0) {
            throw Error(ErrorCode::transport_error, "cannot bind", host);
        }
        return bound;
    }
    if(!impl_->server.bind_to_port(host, port)) {
        throw Error(ErrorCode::transport_error, "cannot bind", host + ":" + std::to_string(port));
    }
    return port;
}

void HttpApi::listen() { impl_->server.listen_after_bind(); }

void HttpApi::stop() {
    if(impl_) {
        impl_->server.stop();
    }
}

void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

} // namespace capassist
