// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/config.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <sentinel/errors.hpp>

namespace sentinel {

namespace {

    std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

    std::string fmt(double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return {buf, res.ptr};
    }

    std::string quote(std::string_view s) {
        std::string out = "\"";
        for (const char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    }

    class Cursor {
      public:
        Cursor(std::size_t line, std::string key, std::string value)
            : line_(line), key_(std::move(key)), value_(std::move(value)) {}

        [[noreturn]] void fail(std::string_view expected) const {
            throw ConfigError("config line " + std::to_string(line_) + ": " + key_ + " expects " +
                              std::string{expected} + ", got \"" + value_ + "\"");
        }

        [[nodiscard]] const std::string& str() const { return value_; }

        [[nodiscard]] double number() const {
            double v{};
            const auto* end = value_.data() + value_.size();
            const auto res = std::from_chars(value_.data(), end, v);
            if (res.ec != std::errc{} || res.ptr != end) fail("a number");
            return v;
        }

        template <typename T>
        [[nodiscard]] T integer() const {
            T v{};
            const auto* end = value_.data() + value_.size();
            const auto res = std::from_chars(value_.data(), end, v);
            if (res.ec != std::errc{} || res.ptr != end) fail("an integer");
            return v;
        }

        [[nodiscard]] bool boolean() const {
            if (value_ == "true") return true;
            if (value_ == "false") return false;
            fail("true or false");
        }

        [[nodiscard]] bool is_auto() const { return value_ == "auto"; }

      private:
        std::size_t line_;
        std::string key_;
        std::string value_;
    };

    std::string unquote(std::string_view raw, std::size_t line) {
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
            std::string out;
            for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
                if (raw[i] == '\\' && i + 2 < raw.size()) ++i;
                out += raw[i];
            }
            return out;
        }
        if (!raw.empty() && raw.front() == '"') {
            throw ConfigError("config line " + std::to_string(line) + ": unterminated string");
        }
        // strip a trailing comment from bare values
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = trim(raw.substr(0, hash));
        return std::string{raw};
    }

    std::vector<int> parse_dims(const Cursor& c) {
        std::vector<int> dims;
        std::string_view s = c.str();
        while (!s.empty()) {
            const auto comma = s.find(',');
            const auto part = trim(s.substr(0, comma));
            int v{};
            const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
            if (res.ec != std::errc{} || res.ptr != part.data() + part.size() || v < 1) c.fail("positive integers separated by commas");
            dims.push_back(v);
            if (comma == std::string_view::npos) break;
            s.remove_prefix(comma + 1);
        }
        return dims;
    }

    void assign(PipelineConfig& cfg, std::string_view section, std::string_view key, const Cursor& c, std::size_t line) {
        const auto unknown = [&] {
            throw ConfigError("config line " + std::to_string(line) + ": unknown key \"" + std::string{key} +
                              "\" in [" + std::string{section} + "]");
        };
        if (section == "pipeline") {
            if (key == "seed") cfg.seed = c.integer<std::uint64_t>();
            else unknown();
        } else if (section == "paths") {
            if (key == "labels") cfg.paths.labels = c.str();
            else if (key == "directory") cfg.paths.directory = c.str();
            else if (key == "records") cfg.paths.records = c.str();
            else if (key == "dataset") cfg.paths.dataset = c.str();
            else if (key == "model") cfg.paths.model = c.str();
            else if (key == "reports") cfg.paths.reports = c.str();
            else unknown();
        } else if (section == "normalize") {
            if (key == "max_len") cfg.normalize.max_len = c.integer<std::size_t>();
            else if (key == "pad_token") cfg.normalize.pad_token = c.str();
            else unknown();
        } else if (section == "train") {
            if (key == "n_trees") cfg.train.n_trees = c.integer<int>();
            else if (key == "max_depth") cfg.train.max_depth = c.integer<int>();
            else if (key == "learning_rate") cfg.train.learning_rate = c.number();
            else if (key == "min_child_weight") cfg.train.min_child_weight = c.number();
            else if (key == "lambda_l2") cfg.train.lambda_l2 = c.number();
            else if (key == "positive_class_weight") cfg.train.positive_class_weight = c.is_auto() ? std::nullopt : std::optional<double>{c.number()};
            else if (key == "row_subsample") cfg.train.row_subsample = c.number();
            else if (key == "test_fraction") cfg.test_fraction = c.number();
            else unknown();
        } else if (section == "structure") {
            if (key == "max_parents") cfg.structure.max_parents = c.integer<int>();
            else if (key == "max_iterations") cfg.structure.max_iterations = c.is_auto() ? std::nullopt : std::optional<std::size_t>{c.integer<std::size_t>()};
            else if (key == "vocabulary_size") cfg.vocabulary_size = c.integer<std::size_t>();
            else unknown();
        } else if (section == "anomaly") {
            if (key == "epochs") cfg.fit.epochs = c.integer<int>();
            else if (key == "batch_size") cfg.fit.batch_size = c.integer<int>();
            else if (key == "learning_rate") cfg.fit.learning_rate = c.number();
            else if (key == "standardize") cfg.fit.standardize = c.boolean();
            else if (key == "hidden_dims") cfg.fit.hidden_dims = c.is_auto() ? std::vector<int>{} : parse_dims(c);
            else if (key == "pca_components") cfg.pca_components = c.integer<int>();
            else unknown();
        } else if (section == "rpc") {
            if (key == "url") cfg.rpc.url = c.str();
            else if (key == "timeout_ms") cfg.rpc.timeout = std::chrono::milliseconds{c.integer<long long>()};
            else if (key == "max_retries") cfg.rpc.max_retries = c.integer<int>();
            else if (key == "max_concurrent_requests") cfg.rpc.max_concurrent_requests = c.integer<int>();
            else if (key == "initial_backoff_ms") cfg.rpc.initial_backoff = std::chrono::milliseconds{c.integer<long long>()};
            else unknown();
        } else if (section == "sampling") {
            if (key == "per_block") cfg.per_block = c.integer<std::size_t>();
            else unknown();
        } else {
            throw ConfigError("config line " + std::to_string(line) + ": unknown section [" + std::string{section} + "]");
        }
    }

}  // namespace

void PipelineConfig::apply_seed(std::uint64_t s) {
    seed = s;
    train.rng_seed = s;
    structure.rng_seed = s;
    fit.rng_seed = s;
}

void PipelineConfig::validate() const {
    if (normalize.max_len < 1) throw ConfigError("normalize.max_len must be >= 1");
    train.validate();
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("train.test_fraction must lie in (0, 1)");
    if (structure.max_parents < 0) throw ConfigError("structure.max_parents must be >= 0");
    if (vocabulary_size < 2) throw ConfigError("structure.vocabulary_size must be >= 2");
    fit.validate();
    if (pca_components < 1) throw ConfigError("anomaly.pca_components must be >= 1");
    if (per_block < 1) throw ConfigError("sampling.per_block must be >= 1");
    if (rpc.max_retries < 0) throw ConfigError("rpc.max_retries must be >= 0");
    if (rpc.max_concurrent_requests < 1) throw ConfigError("rpc.max_concurrent_requests must be >= 1");
}

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
    PipelineConfig cfg = std::move(base);
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string{text}};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section header");
            section = std::string{trim(line.substr(1, line.size() - 2))};
            static constexpr std::string_view kSections[] = {"pipeline",  "paths",   "normalize", "train",
                                                             "structure", "anomaly", "rpc",       "sampling"};
            if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections)) {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": key outside of a [section]");
        }
        const std::string key{trim(line.substr(0, eq))};
        const Cursor cursor{line_no, key, unquote(trim(line.substr(eq + 1)), line_no)};
        assign(cfg, section, key, cursor, line_no);
    }
    cfg.apply_seed(cfg.seed);
    cfg.validate();
    return cfg;
}

std::string format_config(const PipelineConfig& cfg) {
    std::ostringstream o;
    o << "[pipeline]\nseed = " << cfg.seed << "\n\n";
    o << "[paths]\n"
      << "labels = " << quote(cfg.paths.labels) << "\n"
      << "directory = " << quote(cfg.paths.directory) << "\n"
      << "records = " << quote(cfg.paths.records) << "\n"
      << "dataset = " << quote(cfg.paths.dataset) << "\n"
      << "model = " << quote(cfg.paths.model) << "\n"
      << "reports = " << quote(cfg.paths.reports) << "\n\n";
    o << "[normalize]\nmax_len = " << cfg.normalize.max_len << "\npad_token = " << quote(cfg.normalize.pad_token) << "\n\n";
    o << "[train]\n"
      << "n_trees = " << cfg.train.n_trees << "\n"
      << "max_depth = " << cfg.train.max_depth << "\n"
      << "learning_rate = " << fmt(cfg.train.learning_rate) << "\n"
      << "min_child_weight = " << fmt(cfg.train.min_child_weight) << "\n"
      << "lambda_l2 = " << fmt(cfg.train.lambda_l2) << "\n"
      << "positive_class_weight = "
      << (cfg.train.positive_class_weight ? fmt(*cfg.train.positive_class_weight) : std::string{"\"auto\""}) << "\n"
      << "row_subsample = " << fmt(cfg.train.row_subsample) << "\n"
      << "test_fraction = " << fmt(cfg.test_fraction) << "\n\n";
    o << "[structure]\n"
      << "max_parents = " << cfg.structure.max_parents << "\n"
      << "max_iterations = "
      << (cfg.structure.max_iterations ? std::to_string(*cfg.structure.max_iterations) : std::string{"\"auto\""}) << "\n"
      << "vocabulary_size = " << cfg.vocabulary_size << "\n\n";
    std::string dims;
    for (const int d : cfg.fit.hidden_dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
    o << "[anomaly]\n"
      << "epochs = " << cfg.fit.epochs << "\n"
      << "batch_size = " << cfg.fit.batch_size << "\n"
      << "learning_rate = " << fmt(cfg.fit.learning_rate) << "\n"
      << "standardize = " << (cfg.fit.standardize ? "true" : "false") << "\n"
      << "hidden_dims = " << quote(dims.empty() ? "auto" : dims) << "\n"
      << "pca_components = " << cfg.pca_components << "\n\n";
    o << "[rpc]\n"
      << "url = " << quote(cfg.rpc.url) << "\n"
      << "timeout_ms = " << cfg.rpc.timeout.count() << "\n"
      << "max_retries = " << cfg.rpc.max_retries << "\n"
      << "max_concurrent_requests = " << cfg.rpc.max_concurrent_requests << "\n"
      << "initial_backoff_ms = " << cfg.rpc.initial_backoff.count() << "\n\n";
    o << "[sampling]\nper_block = " << cfg.per_block << "\n";
    return o.str();
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream in{path};
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

void save_config(const PipelineConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out{path, std::ios::trunc};
    if (!out) throw IoError("cannot write config " + path.string());
    out << format_config(cfg);
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sentinel
