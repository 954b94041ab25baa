#include "windfault/mlp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace windfault {

namespace {

constexpr double kClip = 1e-12;

Eigen::ArrayXd activate(const Eigen::ArrayXd& z, Activation a) {
    if (a == Activation::logistic) return 1.0 / (1.0 + (-z).exp());
    return z.tanh();
}

Eigen::VectorXd class_sample_weights(const std::vector<int>& y, ClassWeighting mode) {
    Eigen::VectorXd w(y.size());
    if (mode == ClassWeighting::none) {
        w.setOnes();
        return w;
    }
    double n1 = 0;
    for (int v : y) n1 += v;
    const double n = static_cast<double>(y.size());
    const double w0 = n / (2.0 * (n - n1));
    const double w1 = n / (2.0 * n1);
    for (std::size_t i = 0; i < y.size(); ++i) w[static_cast<Eigen::Index>(i)] = y[i] ? w1 : w0;
    return w;
}

double weighted_bce(const Eigen::ArrayXd& p, const std::vector<int>& y,
                    const Eigen::VectorXd& w) {
    double loss = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double pc = std::clamp(p[i], kClip, 1.0 - kClip);
        loss += w[i] * (y[static_cast<std::size_t>(i)] ? -std::log(pc) : -std::log(1.0 - pc));
    }
    return loss / static_cast<double>(p.size());
}

Eigen::ArrayXd forward_scores(const TrainedModel& m, const Eigen::MatrixXd& X_std) {
    Eigen::MatrixXd z1 = X_std * m.w_hidden.transpose();
    z1.rowwise() += m.b_hidden.transpose();
    Eigen::MatrixXd a1(z1.rows(), z1.cols());
    if (m.arch.hidden_activation == Activation::logistic)
        a1.array() = 1.0 / (1.0 + (-z1.array()).exp());
    else
        a1.array() = z1.array().tanh();
    Eigen::ArrayXd z2 = (a1 * m.w_out.transpose()).array() + m.b_out;
    return 1.0 / (1.0 + (-z2).exp());
}

Eigen::MatrixXd standardize(const TrainedModel& m, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd out = X;
    out.rowwise() -= m.feat_mean.transpose();
    out.array().rowwise() /= m.feat_std.transpose().array();
    return out;
}

}  // namespace

std::string activation_name(Activation a) {
    return a == Activation::logistic ? "logistic" : "tanh";
}

Activation activation_from_name(const std::string& s) {
    if (s == "logistic") return Activation::logistic;
    if (s == "tanh") return Activation::tanh_;
    throw ArgumentError("unknown activation: " + s);
}

void TrainingConfig::validate() const {
    if (learning_rate <= 0) throw ArgumentError("learning_rate must be positive");
    if (momentum < 0 || momentum >= 1) throw ArgumentError("momentum must lie in [0,1)");
    if (max_epochs == 0 || patience == 0 || restarts == 0)
        throw ArgumentError("max_epochs, patience and restarts must be positive");
    if (decision_threshold <= 0 || decision_threshold >= 1)
        throw ArgumentError("decision_threshold must lie in (0,1)");
}

DenseView dense_view(const FeatureMatrix& features, const std::vector<int>& labels,
                     const std::vector<std::string>& subset) {
    if (labels.size() != features.rows()) throw ArgumentError("label count mismatch");
    DenseView v;
    std::vector<std::size_t> cols;
    if (subset.empty()) {
        for (std::size_t c = 0; c < features.cols(); ++c) {
            cols.push_back(c);
            v.feature_ids.push_back(features.catalog[c].id);
        }
    } else {
        for (const auto& id : subset) {
            const int c = features.column_index(id);
            if (c < 0) throw ArgumentError("unknown feature id: " + id);
            cols.push_back(static_cast<std::size_t>(c));
            v.feature_ids.push_back(id);
        }
    }
    for (std::size_t r = 0; r < features.rows(); ++r) {
        bool ok = true;
        for (auto c : cols)
            if (is_missing(features.at(r, c))) {
                ok = false;
                break;
            }
        if (ok) v.row_index.push_back(r);
    }
    v.X.resize(static_cast<Eigen::Index>(v.row_index.size()), static_cast<Eigen::Index>(cols.size()));
    v.y.reserve(v.row_index.size());
    for (std::size_t i = 0; i < v.row_index.size(); ++i) {
        const auto r = v.row_index[i];
        for (std::size_t j = 0; j < cols.size(); ++j)
            v.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = features.at(r, cols[j]);
        v.y.push_back(labels[r]);
    }
    return v;
}

std::size_t parameter_count(const MlpArchitecture& arch) {
    return arch.n_hidden * arch.n_inputs + arch.n_hidden + arch.n_hidden + 1;
}

Eigen::VectorXd flatten_parameters(const TrainedModel& m) {
    Eigen::VectorXd theta(parameter_count(m.arch));
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m.w_hidden.rows(); ++i)
        for (Eigen::Index j = 0; j < m.w_hidden.cols(); ++j) theta[k++] = m.w_hidden(i, j);
    for (Eigen::Index i = 0; i < m.b_hidden.size(); ++i) theta[k++] = m.b_hidden[i];
    for (Eigen::Index i = 0; i < m.w_out.size(); ++i) theta[k++] = m.w_out[i];
    theta[k] = m.b_out;
    return theta;
}

void unflatten_parameters(TrainedModel& m, const Eigen::VectorXd& theta) {
    const auto h = static_cast<Eigen::Index>(m.arch.n_hidden);
    const auto d = static_cast<Eigen::Index>(m.arch.n_inputs);
    m.w_hidden.resize(h, d);
    m.b_hidden.resize(h);
    m.w_out.resize(h);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < h; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m.w_hidden(i, j) = theta[k++];
    for (Eigen::Index i = 0; i < h; ++i) m.b_hidden[i] = theta[k++];
    for (Eigen::Index i = 0; i < h; ++i) m.w_out[i] = theta[k++];
    m.b_out = theta[k];
}

std::pair<double, Eigen::VectorXd> loss_and_gradient(const TrainedModel& model,
                                                     const Eigen::MatrixXd& X_std,
                                                     const std::vector<int>& y,
                                                     const Eigen::VectorXd& sample_weights) {
    const Eigen::Index n = X_std.rows();
    Eigen::MatrixXd z1 = X_std * model.w_hidden.transpose();
    z1.rowwise() += model.b_hidden.transpose();
    Eigen::MatrixXd a1(n, z1.cols());
    if (model.arch.hidden_activation == Activation::logistic)
        a1.array() = 1.0 / (1.0 + (-z1.array()).exp());
    else
        a1.array() = z1.array().tanh();
    Eigen::ArrayXd z2 = (a1 * model.w_out.transpose()).array() + model.b_out;
    Eigen::ArrayXd p = 1.0 / (1.0 + (-z2).exp());

    const double loss = weighted_bce(p, y, sample_weights);

    Eigen::ArrayXd dz2(n);
    for (Eigen::Index i = 0; i < n; ++i)
        dz2[i] = sample_weights[i] * (p[i] - static_cast<double>(y[static_cast<std::size_t>(i)])) /
                 static_cast<double>(n);

    TrainedModel g = model;  // reuse shapes for the gradient pieces
    g.w_out = dz2.matrix().transpose() * a1;
    g.b_out = dz2.sum();

    Eigen::MatrixXd da1 = dz2.matrix() * model.w_out;
    Eigen::MatrixXd dz1(n, a1.cols());
    if (model.arch.hidden_activation == Activation::logistic)
        dz1.array() = da1.array() * a1.array() * (1.0 - a1.array());
    else
        dz1.array() = da1.array() * (1.0 - a1.array().square());
    g.w_hidden = dz1.transpose() * X_std;
    g.b_hidden = dz1.colwise().sum();

    return {loss, flatten_parameters(g)};
}

TrainedModel train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                   const std::vector<std::string>& feature_ids, const MlpArchitecture& arch,
                   const TrainingConfig& cfg, const std::optional<Holdout>& validation) {
    cfg.validate();
    if (static_cast<std::size_t>(X.rows()) != y.size()) throw ArgumentError("label count mismatch");
    if (static_cast<std::size_t>(X.cols()) != arch.n_inputs || feature_ids.size() != arch.n_inputs)
        throw ArgumentError("architecture input count mismatch");
    bool has0 = false, has1 = false;
    for (int v : y) (v ? has1 : has0) = true;
    if (!has0 || !has1) throw ArgumentError("degenerate labels: only one class present");

    TrainedModel base;
    base.arch = arch;
    base.feature_ids = feature_ids;
    base.decision_threshold = cfg.decision_threshold;
    base.feat_mean = X.colwise().mean();
    Eigen::MatrixXd centered = X.rowwise() - base.feat_mean.transpose();
    base.feat_std = (centered.array().square().colwise().mean()).sqrt();
    for (Eigen::Index i = 0; i < base.feat_std.size(); ++i)
        if (base.feat_std[i] <= 0) base.feat_std[i] = 1.0;
    Eigen::MatrixXd Xs = centered.array().rowwise() / base.feat_std.transpose().array();

    const Eigen::VectorXd sw = class_sample_weights(y, cfg.class_weighting);
    std::optional<Eigen::MatrixXd> val_Xs;
    Eigen::VectorXd val_sw;
    if (validation) {
        val_Xs = standardize(base, validation->X);
        // class weights come from training frequencies so the monitored loss
        // is comparable across epochs
        double n1 = 0;
        for (int v : y) n1 += v;
        const double n = static_cast<double>(y.size());
        val_sw.resize(static_cast<Eigen::Index>(validation->y.size()));
        for (std::size_t i = 0; i < validation->y.size(); ++i)
            val_sw[static_cast<Eigen::Index>(i)] =
                cfg.class_weighting == ClassWeighting::none
                    ? 1.0
                    : (validation->y[i] ? n / (2.0 * n1) : n / (2.0 * (n - n1)));
    }

    TrainedModel best;
    double best_loss = std::numeric_limits<double>::infinity();
    bool any_ok = false;

    for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
        Rng rng(fnv1a64("restart" + std::to_string(restart),
                        cfg.seed ^ 0x9e3779b97f4a7c15ull));
        TrainedModel m = base;
        const double lim_h = 1.0 / std::sqrt(static_cast<double>(arch.n_inputs));
        const double lim_o = 1.0 / std::sqrt(static_cast<double>(arch.n_hidden));
        Eigen::VectorXd theta(parameter_count(arch));
        Eigen::Index k = 0;
        for (std::size_t i = 0; i < arch.n_hidden * arch.n_inputs; ++i)
            theta[k++] = rng.uniform(-lim_h, lim_h);
        for (std::size_t i = 0; i < arch.n_hidden; ++i) theta[k++] = rng.uniform(-lim_h, lim_h);
        for (std::size_t i = 0; i < arch.n_hidden; ++i) theta[k++] = rng.uniform(-lim_o, lim_o);
        theta[k] = rng.uniform(-lim_o, lim_o);
        unflatten_parameters(m, theta);

        Eigen::VectorXd velocity = Eigen::VectorXd::Zero(theta.size());
        Eigen::VectorXd best_theta = theta;
        double monitored_best = std::numeric_limits<double>::infinity();
        std::size_t stagnant = 0;
        std::size_t epoch = 0;
        bool diverged = false;
        std::vector<double> loss_history;

        for (; epoch < cfg.max_epochs; ++epoch) {
            auto [loss, grad] = loss_and_gradient(m, Xs, y, sw);
            if (!std::isfinite(loss)) {
                diverged = true;
                break;
            }
            loss_history.push_back(loss);
            double monitored = loss;
            if (val_Xs) monitored = weighted_bce(forward_scores(m, *val_Xs), validation->y, val_sw);
            if (monitored < monitored_best) {
                monitored_best = monitored;
                best_theta = theta;
                stagnant = 0;
            } else if (++stagnant >= cfg.patience) {
                break;
            }
            velocity = cfg.momentum * velocity - cfg.learning_rate * grad;
            theta += velocity;
            unflatten_parameters(m, theta);
        }
        if (diverged || !std::isfinite(monitored_best)) continue;

        any_ok = true;
        if (monitored_best < best_loss) {
            best_loss = monitored_best;
            unflatten_parameters(m, best_theta);
            m.summary = {epoch, monitored_best, restart, loss_history};
            best = m;
        }
    }
    if (!any_ok) throw DataError("training diverged in every restart");
    return best;
}

Prediction predict(const TrainedModel& model, const Eigen::MatrixXd& X,
                   const std::vector<std::string>& feature_ids) {
    if (feature_ids.size() != model.feature_ids.size())
        throw ArgumentError("feature count mismatch: expected " +
                            std::to_string(model.feature_ids.size()));
    for (std::size_t i = 0; i < feature_ids.size(); ++i)
        if (feature_ids[i] != model.feature_ids[i])
            throw ArgumentError("feature id mismatch at column " + std::to_string(i) +
                                ": expected " + model.feature_ids[i] + ", got " + feature_ids[i]);
    const Eigen::ArrayXd scores = forward_scores(model, standardize(model, X));
    Prediction out;
    out.scores.resize(static_cast<std::size_t>(scores.size()));
    out.labels.resize(out.scores.size());
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        out.scores[static_cast<std::size_t>(i)] = scores[i];
        out.labels[static_cast<std::size_t>(i)] = scores[i] >= model.decision_threshold ? 1 : 0;
    }
    return out;
}

void save_model(const TrainedModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << "windfault_mlp 1\n";
    out << m.arch.n_inputs << ' ' << m.arch.n_hidden << ' '
        << activation_name(m.arch.hidden_activation) << ' ' << format_double(m.decision_threshold)
        << '\n';
    out << m.summary.epochs_run << ' ' << format_double(m.summary.best_loss) << ' '
        << m.summary.restart_index << '\n';
    for (std::size_t i = 0; i < m.feature_ids.size(); ++i)
        out << m.feature_ids[i] << (i + 1 < m.feature_ids.size() ? '\t' : '\n');
    auto write_row = [&](const auto& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i)
            out << format_double(v[i]) << (i + 1 < v.size() ? ' ' : '\n');
    };
    write_row(m.feat_mean);
    write_row(m.feat_std);
    for (Eigen::Index r = 0; r < m.w_hidden.rows(); ++r) write_row(m.w_hidden.row(r));
    write_row(m.b_hidden);
    write_row(m.w_out);
    out << format_double(m.b_out) << '\n';
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    std::string magic;
    int version;
    in >> magic >> version;
    if (magic != "windfault_mlp" || version != 1) throw ParseError("not a windfault model file");
    TrainedModel m;
    std::string act;
    in >> m.arch.n_inputs >> m.arch.n_hidden >> act >> m.decision_threshold;
    m.arch.hidden_activation = activation_from_name(act);
    in >> m.summary.epochs_run >> m.summary.best_loss >> m.summary.restart_index;
    in.ignore();  // end of summary line
    std::string ids_line;
    std::getline(in, ids_line);
    std::istringstream ids(ids_line);
    std::string id;
    while (std::getline(ids, id, '\t')) m.feature_ids.push_back(id);
    if (m.feature_ids.size() != m.arch.n_inputs) throw ParseError("model feature id count mismatch");
    const auto d = static_cast<Eigen::Index>(m.arch.n_inputs);
    const auto h = static_cast<Eigen::Index>(m.arch.n_hidden);
    m.feat_mean.resize(d);
    m.feat_std.resize(d);
    m.w_hidden.resize(h, d);
    m.b_hidden.resize(h);
    m.w_out.resize(h);
    for (Eigen::Index i = 0; i < d; ++i) in >> m.feat_mean[i];
    for (Eigen::Index i = 0; i < d; ++i) in >> m.feat_std[i];
    for (Eigen::Index r = 0; r < h; ++r)
        for (Eigen::Index c = 0; c < d; ++c) in >> m.w_hidden(r, c);
    for (Eigen::Index i = 0; i < h; ++i) in >> m.b_hidden[i];
    for (Eigen::Index i = 0; i < h; ++i) in >> m.w_out[i];
    in >> m.b_out;
    if (!in) throw ParseError("truncated model file");
    return m;
}

}  // namespace windfault
