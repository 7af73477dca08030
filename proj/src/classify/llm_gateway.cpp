// Project headers first: httplib pulls in <resolv.h>, whose _res macro breaks Eigen.
#include "newsreg/classify.hpp"
#include "newsreg/error.hpp"

#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <thread>

namespace newsreg::classify {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

// LabelCache ---------------------------------------------------------------

LabelCache::LabelCache(std::filesystem::path file) : file_(std::move(file)) {
    std::ifstream in(*file_);
    if (!in) return;  // a missing cache file is an empty cache
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            CacheKey key{j.at("source").get<std::string>(), j.at("prompt_id").get<std::string>(),
                         j.at("headline_id").get<std::string>()};
            CacheEntry e{corpus::parse_label(j.at("label").get<std::string>()), j.at("raw_response").get<std::string>(),
                         j.value("timestamp", std::string{})};
            entries_.emplace(std::move(key), std::move(e));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::parse, file_->string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::optional<CacheEntry> LabelCache::find(const CacheKey& key) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

bool LabelCache::insert(const CacheKey& key, CacheEntry entry) {
    std::lock_guard lock(mutex_);
    if (entries_.count(key)) return false;
    if (file_) {
        json j = json::object();
        j["source"] = key.source;
        j["prompt_id"] = key.prompt_id;
        j["headline_id"] = key.headline_id;
        j["label"] = std::string(corpus::to_string(entry.label));
        j["raw_response"] = entry.raw_response;
        j["timestamp"] = entry.timestamp;
        if (file_->has_parent_path()) std::filesystem::create_directories(file_->parent_path());
        std::ofstream out(*file_, std::ios::app);
        if (!out) throw Error(ErrorCode::io, "cannot append to cache '" + file_->string() + "'");
        out << j.dump() << '\n';
        out.flush();
        if (!out) throw Error(ErrorCode::io, "write failed for cache '" + file_->string() + "'");
    }
    entries_.emplace(key, std::move(entry));
    return true;
}

std::size_t LabelCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

// Endpoint -----------------------------------------------------------------

EndpointConfig EndpointConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::io, "cannot open endpoint config '" + file.string() + "'");
    EndpointConfig cfg;
    try {
        const json j = json::parse(in);
        cfg.base_url = j.at("base_url").get<std::string>();
        cfg.model_name = j.at("model_name").get<std::string>();
        cfg.api_key_env_var = j.value("api_key_env_var", std::string{});
        cfg.max_in_flight = j.value("max_in_flight", cfg.max_in_flight);
        cfg.retries = j.value("retries", cfg.retries);
        cfg.path = j.value("path", cfg.path);
        cfg.timeout_seconds = j.value("timeout_seconds", cfg.timeout_seconds);
        cfg.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", std::int64_t(cfg.backoff_base.count())));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, file.string() + ": " + e.what());
    }
    cfg.validate();
    return cfg;
}

void EndpointConfig::validate() const {
    if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0) {
        throw Error(ErrorCode::validation, "endpoint base_url must start with http:// or https://");
    }
    if (model_name.empty()) throw Error(ErrorCode::validation, "endpoint model_name is empty");
    if (max_in_flight < 1) throw Error(ErrorCode::validation, "endpoint max_in_flight must be >= 1");
    if (retries < 0) throw Error(ErrorCode::validation, "endpoint retries must be >= 0");
}

std::string chat_request_body(const std::string& model, const std::string& prompt) {
    json body = json::object();
    body["model"] = model;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = 0;
    return body.dump();
}

std::string chat_response_content(const std::string& body) {
    try {
        const json j = json::parse(body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::transport, std::string("unexpected chat-completion response: ") + e.what());
    }
}

HttpChatTransport::HttpChatTransport(EndpointConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (!cfg_.api_key_env_var.empty()) {
        if (const char* key = std::getenv(cfg_.api_key_env_var.c_str())) api_key_ = key;
    }
}

std::string HttpChatTransport::complete(const std::string& prompt) {
    httplib::Client client(cfg_.base_url);
    const auto secs = std::chrono::duration<double>(cfg_.timeout_seconds);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    auto res = client.Post(cfg_.path, headers, chat_request_body(cfg_.model_name, prompt), "application/json");
    if (!res) {
        throw Error(ErrorCode::transport, "request to " + cfg_.base_url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw Error(ErrorCode::transport, "endpoint returned HTTP " + std::to_string(res->status));
    }
    return chat_response_content(res->body);
}

// Batch classification -----------------------------------------------------

std::vector<LabelRecord> llm_classify(const std::vector<HeadlineRecord>& headlines, const PromptTemplate& prompt,
                                      ChatTransport* transport, LabelCache& cache, const std::string& source,
                                      const LlmOptions& opts) {
    prompt.validate();
    auto key_for = [&](const HeadlineRecord& h) { return CacheKey{source, prompt.prompt_id, h.id}; };

    std::vector<std::size_t> pending;
    {
        std::set<std::string> queued;
        for (std::size_t i = 0; i < headlines.size(); ++i) {
            if (cache.find(key_for(headlines[i]))) continue;
            if (queued.insert(headlines[i].id).second) pending.push_back(i);
        }
    }
    if (!pending.empty() && transport == nullptr) {
        throw Error(ErrorCode::transport, "headline '" + headlines[pending.front()].id +
                                              "' is not cached and no endpoint is configured");
    }

    std::vector<std::string> failures(pending.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t slot = next++; slot < pending.size(); slot = next++) {
            const HeadlineRecord& h = headlines[pending[slot]];
            const std::string rendered = prompt.render(h.text);
            std::string last_error;
            for (int attempt = 0; attempt <= opts.retries; ++attempt) {
                if (attempt > 0) std::this_thread::sleep_for(opts.backoff_base * (1 << (attempt - 1)));
                try {
                    std::string raw = transport->complete(rendered);
                    const Label label = prompt.parse_answer(raw);
                    cache.insert(key_for(h), CacheEntry{label, std::move(raw), utc_timestamp()});
                    last_error.clear();
                    break;
                } catch (const std::exception& e) {
                    last_error = e.what();
                }
            }
            failures[slot] = std::move(last_error);
        }
    };
    const std::size_t workers = std::min<std::size_t>(std::size_t(std::max(opts.max_in_flight, 1)), pending.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (std::size_t slot = 0; slot < pending.size(); ++slot) {
        if (!failures[slot].empty()) {
            throw Error(ErrorCode::transport, "headline '" + headlines[pending[slot]].id + "' failed after " +
                                                  std::to_string(opts.retries) + " retries: " + failures[slot]);
        }
    }

    std::vector<LabelRecord> out;
    out.reserve(headlines.size());
    for (const auto& h : headlines) {
        const auto entry = cache.find(key_for(h));
        out.push_back({h.id, entry->label, source, prompt.prompt_id});
    }
    return out;
}

}  // namespace newsreg::classify
