#include "impacteq/mc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

#include "impacteq/errors.hpp"

namespace impacteq {

namespace {

constexpr std::uint64_t kShardSize = 1 << 16;

// Stream tags for the counter RNG; multi-asset coordinates get disjoint
// stream ids so shards and dimensions never share counters.
enum Stream : std::uint64_t { kX = 0, kEpsI = 1, kEpsN = 2, kCondX = 3 };

std::uint64_t multi_stream(std::uint64_t tag, int coord) {
    return 4096 * (tag + 1) + static_cast<std::uint64_t>(coord);
}

// Streaming shift-stabilized accumulator for log-mean-exp and its delta
// method standard error.  Tracks sum of exp(v - max) and of exp(2(v - max)).
struct LseAccum {
    double max_v = -std::numeric_limits<double>::infinity();
    double t = 0.0;
    double q = 0.0;
    std::uint64_t n = 0;

    void add(double v) {
        if (n == 0 || v > max_v) {
            const double s = (n == 0) ? 0.0 : std::exp(max_v - v);
            t = t * s + 1.0;
            q = q * s * s + 1.0;
            max_v = v;
        } else {
            const double e = std::exp(v - max_v);
            t += e;
            q += e * e;
        }
        ++n;
    }

    void merge(const LseAccum& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        if (o.max_v <= max_v) {
            const double s = std::exp(o.max_v - max_v);
            t += o.t * s;
            q += o.q * s * s;
        } else {
            const double s = std::exp(max_v - o.max_v);
            t = t * s + o.t;
            q = q * s * s + o.q;
            max_v = o.max_v;
        }
        n += o.n;
    }
};

McReport finalize_ce(const LseAccum& acc, double alpha, double target) {
    const double nn = static_cast<double>(acc.n);
    const double mean_w = acc.t / nn;
    const double var_w = std::max(0.0, acc.q / nn - mean_w * mean_w);
    const double se_L = std::sqrt(var_w / nn) / mean_w;
    McReport r;
    r.estimate = -alpha * (acc.max_v + std::log(mean_w));
    r.std_error = alpha * se_L;
    r.n_paths = acc.n;
    r.target = target;
    r.z_score = (r.estimate - target) / r.std_error;
    return r;
}

// Runs fn(shard_begin, shard_end) -> LseAccum over [0, n) in parallel and
// merges the partials in shard order (deterministic regardless of timing).
LseAccum sharded_lse(std::uint64_t n,
                     const std::function<LseAccum(std::uint64_t, std::uint64_t)>& fn) {
    std::vector<std::future<LseAccum>> parts;
    for (std::uint64_t b = 0; b < n; b += kShardSize) {
        const std::uint64_t e = std::min(n, b + kShardSize);
        parts.push_back(std::async(std::launch::async, fn, b, e));
    }
    LseAccum total;
    for (auto& p : parts) total.merge(p.get());
    return total;
}

void require_epsilon_grid(const std::vector<double>& grid) {
    if (grid.empty())
        throw validation_error("epsilon_grid", "epsilon_grid must be nonempty");
    for (double e : grid) {
        detail::require_finite(e, "epsilon_grid");
        if (std::find(grid.begin(), grid.end(), -e) == grid.end())
            throw validation_error("epsilon_grid",
                                   "epsilon_grid must be symmetric around 0");
    }
}

const MarketParams& scalar_market(const SimConfig& config) {
    const auto* p = std::get_if<MarketParams>(&config.market);
    if (!p)
        throw validation_error("market", "config holds a multi-asset model; "
                                         "use the multi-asset entry point");
    return *p;
}

const AssetModel& multi_market(const SimConfig& config) {
    const auto* m = std::get_if<AssetModel>(&config.market);
    if (!m)
        throw validation_error("market", "config holds scalar params; use the "
                                         "scalar entry point");
    return *m;
}

double antithetic_sign(const SimConfig& config, std::uint64_t i) {
    return (config.antithetic && (i & 1)) ? -1.0 : 1.0;
}

std::uint64_t base_index(const SimConfig& config, std::uint64_t i) {
    return config.antithetic ? i / 2 : i;
}

} // namespace

void SimConfig::validate() const {
    if (n_paths < 2)
        throw validation_error("n_paths", "n_paths must be >= 2");
    if (antithetic && (n_paths & 1))
        throw validation_error("n_paths",
                               "antithetic sampling needs an even n_paths");
    std::visit([](const auto& m) { m.validate(); }, market);
}

ScalarDraws sample_market(const SimConfig& config) {
    config.validate();
    const MarketParams& p = scalar_market(config);
    if (!(p.p_I > 0.0))
        throw validation_error("p_I", "sample_market requires p_I > 0");
    const CounterRng rng(config.seed);
    const double sig_I = 1.0 / std::sqrt(p.p_I);
    const double sig_N = 1.0 / std::sqrt(p.p_N);

    ScalarDraws d;
    d.x.resize(config.n_paths);
    d.g.resize(config.n_paths);
    d.z.resize(config.n_paths);
    for (std::uint64_t i = 0; i < config.n_paths; ++i) {
        const double s = antithetic_sign(config, i);
        const std::uint64_t k = base_index(config, i);
        const double x = s * rng.normal(kX, k);
        d.x[i] = x;
        d.g[i] = x + sig_I * s * rng.normal(kEpsI, k);
        d.z[i] = sig_N * s * rng.normal(kEpsN, k);
    }
    return d;
}

MultiDraws sample_market_multi(const SimConfig& config) {
    config.validate();
    const AssetModel& m = multi_market(config);
    if (!(m.p_I > 0.0))
        throw validation_error("p_I", "sample_market_multi requires p_I > 0");
    const CounterRng rng(config.seed);
    const int d = m.d;
    const Eigen::MatrixXd cov_sqrt =
        spd_sqrt(m.prec_X).llt().solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd prec_sqrt = spd_sqrt(m.prec_X);
    const double sig_I = 1.0 / std::sqrt(m.p_I);
    const double sig_N = 1.0 / std::sqrt(m.p_N);

    MultiDraws out;
    out.x.resize(d, config.n_paths);
    out.g.resize(d, config.n_paths);
    out.z.resize(d, config.n_paths);
    Eigen::VectorXd ex(d), ei(d), en(d);
    for (std::uint64_t i = 0; i < config.n_paths; ++i) {
        const double s = antithetic_sign(config, i);
        const std::uint64_t k = base_index(config, i);
        for (int c = 0; c < d; ++c) {
            ex[c] = s * rng.normal(multi_stream(kX, c), k);
            ei[c] = s * rng.normal(multi_stream(kEpsI, c), k);
            en[c] = s * rng.normal(multi_stream(kEpsN, c), k);
        }
        out.x.col(i) = m.mu_X + cov_sqrt * ex;
        out.g.col(i) = out.x.col(i) + sig_I * (cov_sqrt * ei);
        out.z.col(i) = sig_N * (prec_sqrt * en);
    }
    return out;
}

double verify_clearing(const Equilibrium& eq, const ScalarDraws& draws) {
    double worst = 0.0;
    const std::size_t n = draws.z.size();
    for (std::size_t i = 0; i < n; ++i) {
        double psi_I, psi_U;
        if (is_no_signal(eq.kind)) {
            psi_I = eq.insider_demand(0.0, draws.z[i]);
            psi_U = eq.uninformed_demand(draws.z[i]);
        } else {
            const double h = eq.public_signal(draws.g[i], draws.z[i]);
            psi_I = eq.insider_demand(draws.g[i], draws.z[i]);
            psi_U = eq.uninformed_demand(h);
        }
        const double resid = eq.params.alpha_I * psi_I +
                             eq.params.alpha_U * psi_U + draws.z[i] -
                             eq.params.Pi;
        worst = std::max(worst, std::abs(resid));
    }
    return worst;
}

double verify_clearing(const MatrixEquilibrium& eq, const MultiDraws& draws) {
    double worst = 0.0;
    const Eigen::Index n = draws.z.cols();
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd psi_I, psi_U;
        if (is_no_signal(eq.kind)) {
            psi_I = eq.model.Pi_hat() + eq.insider_z_mat * draws.z.col(i);
            psi_U = eq.uninformed_demand(draws.z.col(i));
        } else {
            const Eigen::VectorXd h =
                eq.public_signal(draws.g.col(i), draws.z.col(i));
            psi_I = eq.insider_demand(draws.g.col(i), draws.z.col(i));
            psi_U = eq.uninformed_demand(h);
        }
        const Eigen::VectorXd resid = eq.model.alpha_I * psi_I +
                                      eq.model.alpha_U * psi_U +
                                      draws.z.col(i) - eq.model.Pi;
        worst = std::max(worst, resid.cwiseAbs().maxCoeff());
    }
    return worst;
}

double verify_optimality(const Equilibrium& eq, const ScalarDraws& draws,
                         const std::vector<double>& epsilon_grid) {
    if (is_no_signal(eq.kind))
        throw validation_error("kind", "verify_optimality expects PI or PT");
    require_epsilon_grid(epsilon_grid);

    const double R = eq.derived.R;
    const double p_pub = eq.p_pub;
    const double v_U = 1.0 / (1.0 + p_pub);
    const double pi_hat = eq.derived.Pi_hat;
    const bool impact = (eq.kind == EquilibriumKind::PriceImpact);

    double worst = -std::numeric_limits<double>::infinity();
    const std::size_t n = draws.z.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = draws.g[i];
        const double z = draws.z[i];
        const double h = eq.public_signal(g, z);
        const double p = eq.price(h);
        const double m_I = (1.0 - R) * g; // E[X | G = g]
        const double m_U = p_pub * h * v_U;

        const auto obj_insider = [&](double psi) {
            const double px =
                impact ? eq.perceived_price(psi, pi_hat, z) : p;
            return -pi_hat * px + psi * (px - m_I) + 0.5 * psi * psi * R;
        };
        const auto obj_uninf = [&](double psi) {
            return -pi_hat * p + psi * (p - m_U) + 0.5 * psi * psi * v_U;
        };

        const double psi_I = eq.insider_demand(g, z);
        const double psi_U = eq.uninformed_demand(h);
        const double fI = obj_insider(psi_I);
        const double fU = obj_uninf(psi_U);
        for (double e : epsilon_grid) {
            worst = std::max(worst, fI - obj_insider(psi_I + e));
            worst = std::max(worst, fU - obj_uninf(psi_U + e));
        }
    }
    return worst;
}

double verify_optimality(const MatrixEquilibrium& eq, const MultiDraws& draws,
                         const std::vector<double>& epsilon_grid) {
    if (is_no_signal(eq.kind))
        throw validation_error("kind", "verify_optimality expects PI or PT");
    require_epsilon_grid(epsilon_grid);

    const AssetModel& m = eq.model;
    const int d = m.d;
    const Eigen::MatrixXd P_X_inv =
        m.prec_X.llt().solve(Eigen::MatrixXd::Identity(d, d));
    const double R = 1.0 / (1.0 + m.p_I);
    const double p_pub = eq.p_pub_scalar;
    const Eigen::MatrixXd C_I = R * P_X_inv;
    const Eigen::MatrixXd C_U = P_X_inv / (1.0 + p_pub);
    const Eigen::VectorXd pih = m.Pi_hat();
    const bool impact = (eq.kind == EquilibriumKind::PriceImpact);

    double worst = -std::numeric_limits<double>::infinity();
    const Eigen::Index n = draws.z.cols();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd g = draws.g.col(i);
        const Eigen::VectorXd z = draws.z.col(i);
        const Eigen::VectorXd h = eq.public_signal(g, z);
        const Eigen::VectorXd p = eq.price(h);
        const Eigen::VectorXd m_I = R * m.mu_X + (1.0 - R) * g;
        const Eigen::VectorXd m_U = (m.mu_X + p_pub * h) / (1.0 + p_pub);

        const auto obj_insider = [&](const Eigen::VectorXd& psi) {
            const Eigen::VectorXd px =
                impact ? eq.perceived_price(psi, pih, z).eval() : p;
            return -pih.dot(px) + psi.dot(px - m_I) + 0.5 * psi.dot(C_I * psi);
        };
        const auto obj_uninf = [&](const Eigen::VectorXd& psi) {
            return -pih.dot(p) + psi.dot(p - m_U) + 0.5 * psi.dot(C_U * psi);
        };

        const Eigen::VectorXd psi_I = eq.insider_demand(g, z);
        const Eigen::VectorXd psi_U = eq.uninformed_demand(h);
        const double fI = obj_insider(psi_I);
        const double fU = obj_uninf(psi_U);
        for (double e : epsilon_grid) {
            for (int c = 0; c < d; ++c) {
                Eigen::VectorXd dI = psi_I;
                dI[c] += e;
                Eigen::VectorXd dU = psi_U;
                dU[c] += e;
                worst = std::max(worst, fI - obj_insider(dI));
                worst = std::max(worst, fU - obj_uninf(dU));
            }
        }
    }
    return worst;
}

McReport estimate_ce(const Equilibrium& eq, const SimConfig& config,
                     Trader trader, const CeLevel& level, double target) {
    config.validate();
    const MarketParams& p = scalar_market(config);
    const CounterRng rng(config.seed);
    const double alpha =
        trader == Trader::Insider ? p.alpha_I : p.alpha_U;
    const double pi_hat = eq.derived.Pi_hat;
    const bool ns = is_no_signal(eq.kind);

    std::function<LseAccum(std::uint64_t, std::uint64_t)> shard_fn;
    if (level.ex_ante) {
        if (!ns && !(p.p_I > 0.0))
            throw validation_error("p_I", "ex-ante sampling requires p_I > 0");
        const double sig_I = ns ? 0.0 : 1.0 / std::sqrt(p.p_I);
        const double sig_N = 1.0 / std::sqrt(p.p_N);
        shard_fn = [&, sig_I, sig_N](std::uint64_t b, std::uint64_t e) {
            LseAccum acc;
            double v_prev = 0.0;
            for (std::uint64_t i = b; i < e; ++i) {
                const double s = antithetic_sign(config, i);
                const std::uint64_t k = base_index(config, i);
                const double x = s * rng.normal(kX, k);
                const double z = sig_N * s * rng.normal(kEpsN, k);
                double price, psi;
                if (ns) {
                    price = eq.price(z);
                    psi = trader == Trader::Insider ? eq.insider_demand(0.0, z)
                                                    : eq.uninformed_demand(z);
                } else {
                    const double g = x + sig_I * s * rng.normal(kEpsI, k);
                    const double h = eq.public_signal(g, z);
                    price = eq.price(h);
                    psi = trader == Trader::Insider ? eq.insider_demand(g, z)
                                                    : eq.uninformed_demand(h);
                }
                const double v = -(pi_hat * price + psi * (x - price));
                if (config.antithetic) {
                    if (i & 1) {
                        const double mx = std::max(v, v_prev);
                        acc.add(mx + std::log(0.5 * (std::exp(v - mx) +
                                                     std::exp(v_prev - mx))));
                    } else {
                        v_prev = v;
                    }
                } else {
                    acc.add(v);
                }
            }
            return acc;
        };
    } else {
        if (ns)
            throw validation_error("kind",
                                   "interim estimation expects PI or PT kinds");
        const double h = eq.public_signal(level.g, level.z);
        const double price = eq.price(h);
        double psi, cond_mean, cond_sd;
        if (trader == Trader::Insider) {
            psi = eq.insider_demand(level.g, level.z);
            cond_mean = (1.0 - eq.derived.R) * level.g;
            cond_sd = std::sqrt(eq.derived.R);
        } else {
            psi = eq.uninformed_demand(h);
            cond_mean = eq.p_pub * h / (1.0 + eq.p_pub);
            cond_sd = std::sqrt(1.0 / (1.0 + eq.p_pub));
        }
        shard_fn = [&, price, psi, cond_mean, cond_sd](std::uint64_t b,
                                                       std::uint64_t e) {
            LseAccum acc;
            double v_prev = 0.0;
            for (std::uint64_t i = b; i < e; ++i) {
                const double s = antithetic_sign(config, i);
                const std::uint64_t k = base_index(config, i);
                const double x = cond_mean + cond_sd * s * rng.normal(kCondX, k);
                const double v = -(pi_hat * price + psi * (x - price));
                if (config.antithetic) {
                    if (i & 1) {
                        const double mx = std::max(v, v_prev);
                        acc.add(mx + std::log(0.5 * (std::exp(v - mx) +
                                                     std::exp(v_prev - mx))));
                    } else {
                        v_prev = v;
                    }
                } else {
                    acc.add(v);
                }
            }
            return acc;
        };
    }

    return finalize_ce(sharded_lse(config.n_paths, shard_fn), alpha, target);
}

McReport estimate_ce(const MatrixEquilibrium& eq, const SimConfig& config,
                     Trader trader, const CeLevelMulti& level, double target) {
    config.validate();
    const AssetModel& m = multi_market(config);
    const CounterRng rng(config.seed);
    const double alpha = trader == Trader::Insider ? m.alpha_I : m.alpha_U;
    const int d = m.d;
    const Eigen::VectorXd pih = m.Pi_hat();
    const Eigen::MatrixXd cov_sqrt =
        spd_sqrt(m.prec_X).llt().solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd prec_sqrt = spd_sqrt(m.prec_X);
    if (is_no_signal(eq.kind))
        throw validation_error("kind",
                               "multi-asset CE estimation expects PI or PT");
    if (config.antithetic)
        throw validation_error("antithetic",
                               "antithetic pairing is implemented for the "
                               "scalar estimator only");

    std::function<LseAccum(std::uint64_t, std::uint64_t)> shard_fn;
    if (level.ex_ante) {
        const double sig_I = 1.0 / std::sqrt(m.p_I);
        const double sig_N = 1.0 / std::sqrt(m.p_N);
        shard_fn = [&, sig_I, sig_N](std::uint64_t b, std::uint64_t e) {
            LseAccum acc;
            Eigen::VectorXd ex(d), ei(d), en(d);
            for (std::uint64_t i = b; i < e; ++i) {
                const double s = antithetic_sign(config, i);
                const std::uint64_t k = base_index(config, i);
                for (int c = 0; c < d; ++c) {
                    ex[c] = s * rng.normal(multi_stream(kX, c), k);
                    ei[c] = s * rng.normal(multi_stream(kEpsI, c), k);
                    en[c] = s * rng.normal(multi_stream(kEpsN, c), k);
                }
                const Eigen::VectorXd x = m.mu_X + cov_sqrt * ex;
                const Eigen::VectorXd g = x + sig_I * (cov_sqrt * ei);
                const Eigen::VectorXd z = sig_N * (prec_sqrt * en);
                const Eigen::VectorXd h = eq.public_signal(g, z);
                const Eigen::VectorXd price = eq.price(h);
                const Eigen::VectorXd psi = trader == Trader::Insider
                                                ? eq.insider_demand(g, z)
                                                : eq.uninformed_demand(h);
                acc.add(-(pih.dot(price) + psi.dot(x - price)));
            }
            return acc;
        };
    } else {
        if (level.g.size() != d || level.z.size() != d)
            throw validation_error("level", "interim (g, z) have wrong dimension");
        const Eigen::VectorXd h = eq.public_signal(level.g, level.z);
        const Eigen::VectorXd price = eq.price(h);
        const double R = 1.0 / (1.0 + m.p_I);
        Eigen::VectorXd psi, cond_mean;
        Eigen::MatrixXd cond_sqrt;
        if (trader == Trader::Insider) {
            psi = eq.insider_demand(level.g, level.z);
            cond_mean = R * m.mu_X + (1.0 - R) * level.g;
            cond_sqrt = std::sqrt(R) * cov_sqrt;
        } else {
            psi = eq.uninformed_demand(h);
            const double pp = eq.p_pub_scalar;
            cond_mean = (m.mu_X + pp * h) / (1.0 + pp);
            cond_sqrt = cov_sqrt / std::sqrt(1.0 + pp);
        }
        shard_fn = [&, price, psi, cond_mean, cond_sqrt](std::uint64_t b,
                                                         std::uint64_t e) {
            LseAccum acc;
            Eigen::VectorXd eps(d);
            for (std::uint64_t i = b; i < e; ++i) {
                for (int c = 0; c < d; ++c)
                    eps[c] = rng.normal(multi_stream(kCondX, c), i);
                const Eigen::VectorXd x = cond_mean + cond_sqrt * eps;
                acc.add(-(pih.dot(price) + psi.dot(x - price)));
            }
            return acc;
        };
    }

    return finalize_ce(sharded_lse(config.n_paths, shard_fn), alpha, target);
}

McReport estimate_public_precision(const ScalarDraws& draws,
                                   const Equilibrium& eq) {
    if (is_no_signal(eq.kind))
        throw validation_error("kind",
                               "estimate_public_precision expects PI or PT");
    const std::size_t n = draws.x.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        mean += (draws.g[i] - draws.x[i]) + eq.lambda_sig * draws.z[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double noise =
            (draws.g[i] - draws.x[i]) + eq.lambda_sig * draws.z[i] - mean;
        ss += noise * noise;
    }
    const double var_hat = ss / static_cast<double>(n - 1);
    const double target_var = 1.0 / eq.params.p_I +
                              eq.lambda_sig * eq.lambda_sig / eq.params.p_N;
    McReport r;
    r.estimate = var_hat; // noise variance of H - X; precision is 1/estimate
    r.std_error = var_hat * std::sqrt(2.0 / static_cast<double>(n - 1));
    r.n_paths = n;
    r.target = target_var;
    r.z_score = (var_hat - target_var) / r.std_error;
    return r;
}

McReport estimate_public_precision(const MultiDraws& draws,
                                   const MatrixEquilibrium& eq) {
    if (is_no_signal(eq.kind))
        throw validation_error("kind",
                               "estimate_public_precision expects PI or PT");
    const int d = eq.model.d;
    const Eigen::Index n = draws.x.cols();
    if (n < d + 1)
        throw validation_error("n_paths",
                               "need more than d+1 draws for the covariance");
    Eigen::MatrixXd noise(d, n);
    for (Eigen::Index i = 0; i < n; ++i)
        noise.col(i) =
            (draws.g.col(i) - draws.x.col(i)) + eq.Lambda * draws.z.col(i);
    const Eigen::VectorXd mu = noise.rowwise().mean();
    noise.colwise() -= mu;
    const Eigen::MatrixXd cov =
        noise * noise.transpose() / static_cast<double>(n - 1);

    const Eigen::MatrixXd P_I = eq.model.p_I * eq.model.prec_X;
    const Eigen::MatrixXd P_N_inv = eq.model.prec_X / eq.model.p_N;
    const Eigen::MatrixXd target =
        P_I.llt().solve(Eigen::MatrixXd::Identity(d, d)) +
        eq.Lambda * P_N_inv * eq.Lambda.transpose();

    double max_z = 0.0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const double se = std::sqrt(
                (cov(r, r) * cov(c, c) + cov(r, c) * cov(r, c)) /
                static_cast<double>(n - 1));
            max_z = std::max(max_z, std::abs(cov(r, c) - target(r, c)) / se);
        }
    McReport rep;
    rep.estimate = cov.norm();
    rep.std_error = target.norm() * std::sqrt(2.0 / static_cast<double>(n - 1));
    rep.n_paths = n;
    rep.target = target.norm();
    rep.z_score = max_z; // max entrywise |z| is the decision statistic
    return rep;
}

std::vector<SuiteEntry> run_suite(const MarketParams& params,
                                  const SimConfig& config_in,
                                  bool corrupt_insider) {
    SimConfig config = config_in;
    config.market = params;
    config.validate();
    params.validate();
    if (!(params.p_I > 0.0))
        throw validation_error("p_I", "run_suite requires p_I > 0");

    Equilibrium pi = solve_pi(params);
    const Equilibrium pt = solve_pt(params);
    const Equilibrium ns_pi = solve_no_signal(params, true);
    const Equilibrium ns_pt = solve_no_signal(params, false);
    if (corrupt_insider) pi.insider_g *= 1.01;

    SimConfig small = config;
    small.n_paths = std::min<std::uint64_t>(config.n_paths, 100000);
    const ScalarDraws draws = sample_market(small);
    const std::vector<double> eps{-1e-1, -1e-2, 1e-2, 1e-1};

    std::vector<SuiteEntry> out;
    const auto threshold_check = [&](const std::string& name, double value,
                                     double bound) {
        McReport r;
        r.estimate = value;
        r.std_error = 0.0;
        r.n_paths = small.n_paths;
        r.target = bound;
        r.z_score = 0.0;
        out.push_back({name, r, value <= bound});
    };

    threshold_check("clearing_pi", verify_clearing(pi, draws), 1e-10);
    threshold_check("clearing_pt", verify_clearing(pt, draws), 1e-10);
    threshold_check("clearing_ns_pi", verify_clearing(ns_pi, draws), 1e-10);
    threshold_check("clearing_ns_pt", verify_clearing(ns_pt, draws), 1e-10);
    threshold_check("optimality_pi", verify_optimality(pi, draws, eps), 1e-12);
    threshold_check("optimality_pt", verify_optimality(pt, draws, eps), 1e-12);

    // z-scored checks: reseed once at seed+1 on |z| > 4, fail hard on repeat.
    const auto z_check = [&](const std::string& name,
                             const std::function<McReport(const SimConfig&)>& run) {
        McReport r = run(config);
        if (std::abs(r.z_score) > 4.0) {
            SimConfig retry = config;
            retry.seed = config.seed + 1;
            r = run(retry);
        }
        out.push_back({name, r, std::abs(r.z_score) <= 4.0});
    };

    const CEReport ce = ce_ex_ante(params);
    z_check("ce_exante_I_pi", [&](const SimConfig& c) {
        return estimate_ce(pi, c, Trader::Insider, CeLevel::exante(), ce.ce_I_pi);
    });
    z_check("ce_exante_U_pi", [&](const SimConfig& c) {
        return estimate_ce(pi, c, Trader::Uninformed, CeLevel::exante(),
                           ce.ce_U_pi);
    });
    z_check("ce_exante_I_pt", [&](const SimConfig& c) {
        return estimate_ce(pt, c, Trader::Insider, CeLevel::exante(), ce.ce_I_pt);
    });
    z_check("ce_exante_U_pt", [&](const SimConfig& c) {
        return estimate_ce(pt, c, Trader::Uninformed, CeLevel::exante(),
                           ce.ce_U_pt);
    });

    const double g_spot = 1.0, z_spot = 0.5;
    const InterimCE int_pi =
        ce_interim(params, EquilibriumKind::PriceImpact, g_spot, z_spot);
    const InterimCE int_pt =
        ce_interim(params, EquilibriumKind::PriceTaking, g_spot, z_spot);
    z_check("ce_interim_I_pi", [&](const SimConfig& c) {
        return estimate_ce(pi, c, Trader::Insider, CeLevel::interim(g_spot, z_spot),
                           int_pi.ce_I);
    });
    z_check("ce_interim_U_pi", [&](const SimConfig& c) {
        return estimate_ce(pi, c, Trader::Uninformed,
                           CeLevel::interim(g_spot, z_spot), int_pi.ce_U);
    });
    z_check("ce_interim_I_pt", [&](const SimConfig& c) {
        return estimate_ce(pt, c, Trader::Insider, CeLevel::interim(g_spot, z_spot),
                           int_pt.ce_I);
    });
    z_check("ce_interim_U_pt", [&](const SimConfig& c) {
        return estimate_ce(pt, c, Trader::Uninformed,
                           CeLevel::interim(g_spot, z_spot), int_pt.ce_U);
    });

    const McReport prec_pi = estimate_public_precision(draws, pi);
    const McReport prec_pt = estimate_public_precision(draws, pt);
    out.push_back({"precision_pi", prec_pi, std::abs(prec_pi.z_score) <= 4.0});
    out.push_back({"precision_pt", prec_pt, std::abs(prec_pt.z_score) <= 4.0});

    // Noisier PI signal: estimated PI precision below estimated PT precision.
    McReport order;
    order.estimate = 1.0 / prec_pi.estimate;
    order.target = 1.0 / prec_pt.estimate;
    order.std_error = 0.0;
    order.n_paths = small.n_paths;
    order.z_score = 0.0;
    out.push_back(
        {"precision_ordering_pi_lt_pt", order, order.estimate < order.target});

    return out;
}

} // namespace impacteq
