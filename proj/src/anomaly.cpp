// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/anomaly.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include <sentinel/errors.hpp>
#include <sentinel/random.hpp>

namespace sentinel::anomaly {

using nlohmann::json;

namespace {

    void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
        if (got != want) {
            throw DimensionError(std::string{what} + ": expected " + std::to_string(want) + " values, got " +
                                 std::to_string(got));
        }
    }

    std::string read_file(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    void write_file(const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out << text;
    }

    std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

    Eigen::VectorXd from_std(const std::vector<double>& v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    }

    json header(std::string_view format) { return json{{"format", format}, {"version", kAnomalyFormatVersion}}; }

    void check_header(const json& j, std::string_view format) {
        if (j.value("format", "") != format) throw ModelFormatError("not a " + std::string{format} + " file");
        const int version = j.at("version").get<int>();
        if (version != kAnomalyFormatVersion) {
            throw ModelFormatError("format version " + std::to_string(version) + ", expected " +
                                   std::to_string(kAnomalyFormatVersion));
        }
    }

    template <typename Fn>
    auto parse_model(std::string_view text, Fn&& fn) {
        try {
            return fn(json::parse(text));
        } catch (const json::exception& e) {
            throw ModelFormatError(std::string{"malformed model file: "} + e.what());
        }
    }

    // Forward pass over a batch laid out as columns; returns activations of every layer.
    std::vector<Eigen::MatrixXd> forward(const AutoencoderModel& m, const Eigen::MatrixXd& input_cols) {
        std::vector<Eigen::MatrixXd> acts;
        acts.reserve(m.weights.size() + 1);
        acts.push_back(input_cols);
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            Eigen::MatrixXd z = (m.weights[l] * acts.back()).colwise() + m.biases[l];
            if (l + 1 < m.weights.size()) z = z.array().tanh().matrix();
            acts.push_back(std::move(z));
        }
        return acts;
    }

    Eigen::MatrixXd standardize(const AutoencoderModel& m, const Eigen::MatrixXd& rows) {
        return ((rows.rowwise() - m.input_mean.transpose()).array().rowwise() / m.input_scale.transpose().array()).matrix();
    }

    Eigen::VectorXd standardize(const AutoencoderModel& m, const Eigen::VectorXd& row) {
        return ((row - m.input_mean).array() / m.input_scale.array()).matrix();
    }

    struct Adam {
        explicit Adam(Eigen::Index n) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}

        void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr) {
            ++t;
            m = beta1 * m + (1.0 - beta1) * grad;
            v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
            const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
            const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
            params.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
        }

        Eigen::VectorXd m;
        Eigen::VectorXd v;
        long t{0};
        double beta1{0.9};
        double beta2{0.999};
        double eps{1e-8};
    };

}  // namespace

// ---------------------------------------------------------------------------
// PCA

PcaModel pca_fit(const Eigen::MatrixXd& rows, Eigen::Index k) {
    const Eigen::Index n = rows.rows();
    const Eigen::Index d = rows.cols();
    if (n < 2) throw DimensionError("PCA needs at least 2 rows, got " + std::to_string(n));
    if (k < 1 || k > d) throw DimensionError("PCA k=" + std::to_string(k) + " must be in [1, " + std::to_string(d) + "]");
    if (!rows.allFinite()) throw DimensionError("PCA input contains non-finite values");

    PcaModel model;
    model.mean = rows.colwise().mean().transpose();
    const Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
    const auto& v = svd.matrixV();
    const auto& s = svd.singularValues();

    model.components.resize(k, d);
    model.explained_variance.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        Eigen::VectorXd axis = v.col(i);
        Eigen::Index arg = 0;
        axis.cwiseAbs().maxCoeff(&arg);
        if (axis(arg) < 0) axis = -axis;
        model.components.row(i) = axis.transpose();
        const double sv = i < s.size() ? s(i) : 0.0;
        model.explained_variance(i) = sv * sv / static_cast<double>(n - 1);
    }
    return model;
}

Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& row) {
    require_dim(row.size(), model.input_dim(), "PCA projection");
    return model.components * (row - model.mean);
}

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& rows) {
    require_dim(rows.cols(), model.input_dim(), "PCA projection");
    return (rows.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Eigen::VectorXd pca_inverse(const PcaModel& model, const Eigen::VectorXd& coords) {
    require_dim(coords.size(), model.k(), "PCA inverse projection");
    return model.mean + model.components.transpose() * coords;
}

// ---------------------------------------------------------------------------
// Autoencoder

Eigen::Index AutoencoderModel::parameter_count() const {
    Eigen::Index n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

void FitConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    for (const int h : hidden_dims) {
        if (h < 1) throw ConfigError("hidden layer sizes must be >= 1");
    }
}

std::vector<int> default_layer_dims(int d) {
    const int h = std::max(2, d / 2);
    const int z = std::max(1, d / 4);
    return {d, h, z, h, d};
}

AutoencoderModel make_autoencoder(std::vector<int> layer_dims, std::uint64_t seed) {
    if (layer_dims.size() < 3) throw DimensionError("an autoencoder needs at least one hidden layer");
    const auto n = layer_dims.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (layer_dims[i] < 1) throw DimensionError("layer sizes must be >= 1");
        if (layer_dims[i] != layer_dims[n - 1 - i]) throw DimensionError("layer sizes must be symmetric around the bottleneck");
    }
    if (layer_dims.front() < 2) throw DimensionError("autoencoder input dimension must be >= 2");
    if (layer_dims[n / 2] >= layer_dims.front()) throw DimensionError("bottleneck must be narrower than the input");

    AutoencoderModel m;
    m.layer_dims = std::move(layer_dims);
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < n; ++l) {
        const int fan_in = m.layer_dims[l];
        const int fan_out = m.layer_dims[l + 1];
        const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = rng.uniform(-a, a);
        }
        m.weights.push_back(std::move(w));
        m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    m.input_mean = Eigen::VectorXd::Zero(m.input_dim());
    m.input_scale = Eigen::VectorXd::Ones(m.input_dim());
    return m;
}

Eigen::VectorXd flatten_parameters(const AutoencoderModel& model) {
    Eigen::VectorXd flat(model.parameter_count());
    Eigen::Index pos = 0;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const auto& w = model.weights[l];
        flat.segment(pos, w.size()) = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
        pos += w.size();
        flat.segment(pos, model.biases[l].size()) = model.biases[l];
        pos += model.biases[l].size();
    }
    return flat;
}

void set_parameters(AutoencoderModel& model, const Eigen::VectorXd& flat) {
    require_dim(flat.size(), model.parameter_count(), "autoencoder parameters");
    Eigen::Index pos = 0;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        auto& w = model.weights[l];
        Eigen::Map<Eigen::VectorXd>(w.data(), w.size()) = flat.segment(pos, w.size());
        pos += w.size();
        model.biases[l] = flat.segment(pos, model.biases[l].size());
        pos += model.biases[l].size();
    }
}

double ae_loss(const AutoencoderModel& model, const Eigen::MatrixXd& standardized_rows) {
    const Eigen::MatrixXd x = standardized_rows.transpose();
    const auto acts = forward(model, x);
    return (acts.back() - x).squaredNorm() / static_cast<double>(x.size());
}

LossAndGradient ae_loss_and_gradient(const AutoencoderModel& model, const Eigen::MatrixXd& standardized_rows) {
    require_dim(standardized_rows.cols(), model.input_dim(), "autoencoder batch");
    const Eigen::MatrixXd x = standardized_rows.transpose();
    const auto acts = forward(model, x);
    const double scale = 1.0 / static_cast<double>(x.size());
    const Eigen::MatrixXd residual = acts.back() - x;

    LossAndGradient out;
    out.loss = residual.squaredNorm() * scale;
    out.gradient.resize(model.parameter_count());

    std::vector<Eigen::MatrixXd> grad_w(model.weights.size());
    std::vector<Eigen::VectorXd> grad_b(model.weights.size());
    Eigen::MatrixXd delta = 2.0 * scale * residual;  // dL/dz of the linear output layer
    for (std::size_t l = model.weights.size(); l-- > 0;) {
        grad_w[l] = delta * acts[l].transpose();
        grad_b[l] = delta.rowwise().sum();
        if (l > 0) {
            const Eigen::MatrixXd upstream = model.weights[l].transpose() * delta;
            delta = (upstream.array() * (1.0 - acts[l].array().square())).matrix();
        }
    }
    Eigen::Index pos = 0;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        out.gradient.segment(pos, grad_w[l].size()) = Eigen::Map<const Eigen::VectorXd>(grad_w[l].data(), grad_w[l].size());
        pos += grad_w[l].size();
        out.gradient.segment(pos, grad_b[l].size()) = grad_b[l];
        pos += grad_b[l].size();
    }
    return out;
}

AutoencoderModel ae_fit(const Eigen::MatrixXd& rows, const FitConfig& cfg, FitLog* log) {
    cfg.validate();
    const auto d = static_cast<int>(rows.cols());
    if (d < 2) throw DimensionError("autoencoder input dimension must be >= 2, got " + std::to_string(d));
    if (rows.rows() < 1) throw DimensionError("autoencoder needs at least one row");
    if (!rows.allFinite()) throw DimensionError("autoencoder input contains non-finite values");

    std::vector<int> dims;
    if (cfg.hidden_dims.empty()) {
        dims = default_layer_dims(d);
    } else {
        dims.push_back(d);
        dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
        dims.insert(dims.end(), cfg.hidden_dims.rbegin() + 1, cfg.hidden_dims.rend());
        dims.push_back(d);
    }
    AutoencoderModel model = make_autoencoder(dims, cfg.rng_seed);
    if (cfg.standardize) {
        model.input_mean = rows.colwise().mean().transpose();
        const Eigen::MatrixXd centered = rows.rowwise() - model.input_mean.transpose();
        model.input_scale = (centered.array().square().colwise().sum() / static_cast<double>(rows.rows())).sqrt().transpose();
        for (Eigen::Index c = 0; c < model.input_scale.size(); ++c) {
            if (!(model.input_scale(c) > 0.0)) model.input_scale(c) = 1.0;
        }
    }

    const Eigen::MatrixXd data = standardize(model, rows);
    const auto n = static_cast<std::size_t>(data.rows());
    const auto batch = std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), n);
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    Rng rng(cfg.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    Adam adam(model.parameter_count());
    Eigen::VectorXd params = flatten_parameters(model);

    const auto check = [](double loss) {
        if (!std::isfinite(loss)) throw DivergenceError("autoencoder loss became non-finite");
    };
    double loss = ae_loss(model, data);
    check(loss);
    if (log != nullptr) log->epoch_loss.assign(1, loss);

    Eigen::MatrixXd mb;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(std::span<Eigen::Index>(order));
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(n, start + batch);
            mb.resize(static_cast<Eigen::Index>(end - start), data.cols());
            for (std::size_t i = start; i < end; ++i) mb.row(static_cast<Eigen::Index>(i - start)) = data.row(order[i]);
            const auto lg = ae_loss_and_gradient(model, mb);
            check(lg.loss);
            adam.step(params, lg.gradient, cfg.learning_rate);
            set_parameters(model, params);
        }
        loss = ae_loss(model, data);
        check(loss);
        if (log != nullptr) log->epoch_loss.push_back(loss);
    }
    return model;
}

Eigen::VectorXd ae_reconstruct(const AutoencoderModel& model, const Eigen::VectorXd& standardized_row) {
    require_dim(standardized_row.size(), model.input_dim(), "autoencoder input");
    return forward(model, standardized_row).back();
}

double ae_score(const AutoencoderModel& model, const Eigen::VectorXd& row) {
    require_dim(row.size(), model.input_dim(), "autoencoder input");
    const Eigen::VectorXd x = standardize(model, row);
    return (ae_reconstruct(model, x) - x).squaredNorm() / static_cast<double>(x.size());
}

Eigen::VectorXd ae_score(const AutoencoderModel& model, const Eigen::MatrixXd& rows) {
    require_dim(rows.cols(), model.input_dim(), "autoencoder input");
    const Eigen::MatrixXd x = standardize(model, rows).transpose();
    const auto acts = forward(model, x);
    return ((acts.back() - x).array().square().colwise().sum() / static_cast<double>(x.rows())).transpose();
}

Eigen::VectorXd ae_encode(const AutoencoderModel& model, const Eigen::VectorXd& row) {
    require_dim(row.size(), model.input_dim(), "autoencoder input");
    return forward(model, Eigen::MatrixXd(standardize(model, row)))[model.bottleneck_layer()];
}

Eigen::MatrixXd ae_encode(const AutoencoderModel& model, const Eigen::MatrixXd& rows) {
    require_dim(rows.cols(), model.input_dim(), "autoencoder input");
    const Eigen::MatrixXd x = standardize(model, rows).transpose();
    return forward(model, x)[model.bottleneck_layer()].transpose();
}

// ---------------------------------------------------------------------------
// Persistence

std::string to_json(const PcaModel& model) {
    json j = header("sentinel-pca");
    j["input_dim"] = model.input_dim();
    j["k"] = model.k();
    j["mean"] = to_std(model.mean);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = model.components;
    j["components"] = std::vector<double>(rm.data(), rm.data() + rm.size());
    j["explained_variance"] = to_std(model.explained_variance);
    j["feature_schema"] = model.feature_schema;
    return j.dump(1) + "\n";
}

PcaModel pca_from_json(std::string_view text) {
    return parse_model(text, [](const json& j) {
        check_header(j, "sentinel-pca");
        PcaModel m;
        const auto d = j.at("input_dim").get<Eigen::Index>();
        const auto k = j.at("k").get<Eigen::Index>();
        m.mean = from_std(j.at("mean").get<std::vector<double>>());
        const auto comps = j.at("components").get<std::vector<double>>();
        m.explained_variance = from_std(j.at("explained_variance").get<std::vector<double>>());
        if (m.mean.size() != d || static_cast<Eigen::Index>(comps.size()) != k * d || m.explained_variance.size() != k) {
            throw ModelFormatError("PCA file dimensions are inconsistent");
        }
        m.components = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(comps.data(), k, d);
        m.feature_schema = j.value("feature_schema", std::vector<std::string>{});
        return m;
    });
}

std::string to_json(const AutoencoderModel& model) {
    json j = header("sentinel-autoencoder");
    j["layer_dims"] = model.layer_dims;
    j["activation"] = model.activation;
    j["parameters"] = to_std(flatten_parameters(model));
    j["input_mean"] = to_std(model.input_mean);
    j["input_scale"] = to_std(model.input_scale);
    j["feature_schema"] = model.feature_schema;
    return j.dump(1) + "\n";
}

AutoencoderModel autoencoder_from_json(std::string_view text) {
    return parse_model(text, [](const json& j) {
        check_header(j, "sentinel-autoencoder");
        if (j.at("activation").get<std::string>() != "tanh") throw ModelFormatError("only tanh autoencoders are supported");
        AutoencoderModel m = make_autoencoder(j.at("layer_dims").get<std::vector<int>>(), 0);
        const auto params = from_std(j.at("parameters").get<std::vector<double>>());
        if (params.size() != m.parameter_count()) throw ModelFormatError("parameter count does not match layer_dims");
        set_parameters(m, params);
        m.input_mean = from_std(j.at("input_mean").get<std::vector<double>>());
        m.input_scale = from_std(j.at("input_scale").get<std::vector<double>>());
        if (m.input_mean.size() != m.input_dim() || m.input_scale.size() != m.input_dim()) {
            throw ModelFormatError("standardization vectors do not match the input dimension");
        }
        if (!params.allFinite()) throw ModelFormatError("autoencoder parameters are not finite");
        m.feature_schema = j.value("feature_schema", std::vector<std::string>{});
        return m;
    });
}

void save_pca(const PcaModel& model, const std::filesystem::path& path) { write_file(path, to_json(model)); }
PcaModel load_pca(const std::filesystem::path& path) { return pca_from_json(read_file(path)); }
void save_autoencoder(const AutoencoderModel& model, const std::filesystem::path& path) { write_file(path, to_json(model)); }
AutoencoderModel load_autoencoder(const std::filesystem::path& path) { return autoencoder_from_json(read_file(path)); }

std::string projection_csv(const Eigen::MatrixXd& coords, std::span<const int> labels) {
    std::string out;
    for (Eigen::Index c = 0; c < coords.cols(); ++c) out += "c" + std::to_string(c) + ",";
    out += "label\n";
    char buf[64];
    for (Eigen::Index r = 0; r < coords.rows(); ++r) {
        for (Eigen::Index c = 0; c < coords.cols(); ++c) {
            const auto res = std::to_chars(buf, buf + sizeof(buf), coords(r, c));
            out.append(buf, res.ptr);
            out += ',';
        }
        if (static_cast<std::size_t>(r) < labels.size()) out += std::to_string(labels[static_cast<std::size_t>(r)]);
        out += '\n';
    }
    return out;
}

}  // namespace sentinel::anomaly
