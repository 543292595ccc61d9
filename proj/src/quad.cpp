#include "qhd/quad.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <thread>

#include "qhd/errors.hpp"

namespace qhd {

namespace {

constexpr double kPi = std::numbers::pi;

// Closed Clenshaw-Curtis rule with N+1 nodes x_j = cos(j*pi/N) on [-1,1].
struct CCRule {
    std::vector<double> nodes;    // descending from +1 to -1
    std::vector<double> weights;  // full rule
    std::vector<double> half;     // embedded N/2 rule on the even-index nodes
};

CCRule make_cc(int N) {
    CCRule r;
    r.nodes.resize(N + 1);
    r.weights.resize(N + 1);
    for (int j = 0; j <= N; ++j) r.nodes[j] = std::cos(j * kPi / N);
    auto weights_for = [](int n) {
        std::vector<double> w(n + 1, 0.0);
        for (int j = 0; j <= n; ++j) {
            const double cj = (j == 0 || j == n) ? 0.5 : 1.0;
            double sum = 1.0;
            for (int k = 1; k <= n / 2; ++k) {
                const double bk = (2 * k == n) ? 1.0 : 2.0;
                sum -= bk * std::cos(2.0 * kPi * k * j / n) / (4.0 * k * k - 1.0);
            }
            w[j] = 2.0 * cj * sum / n;
        }
        return w;
    };
    r.weights = weights_for(N);
    r.half = weights_for(N / 2);
    return r;
}

const CCRule& cc_rule(int N) {
    static std::map<int, CCRule> cache;
    auto it = cache.find(N);
    if (it == cache.end()) it = cache.emplace(N, make_cc(N)).first;
    return it->second;
}

struct Panel {
    double s0, s1;
    cplx value;
    double err;
};

}  // namespace

IntegralResult integrate_path(const PathIntegrand& f, const Path& path, const QuadConfig& cfg) {
    IntegralResult out;
    if (path.segments.empty()) {
        out.value = 0.0;
        return out;
    }
    int N = cfg.nodes_per_panel;
    if (N < 4) N = 4;
    if (N % 2) ++N;
    const CCRule& rule = cc_rule(N);

    auto eval_panel = [&](double s0, double s1) {
        cplx full = 0.0, coarse = 0.0;
        const double mid = 0.5 * (s0 + s1), rad = 0.5 * (s1 - s0);
        for (int j = 0; j <= N; ++j) {
            const double s = mid + rad * rule.nodes[j];
            const cplx val = f(path.point(s), s) * path.derivative(s);
            full += rule.weights[j] * val;
            if (j % 2 == 0) coarse += rule.half[j / 2] * val;
        }
        Panel p;
        p.s0 = s0;
        p.s1 = s1;
        p.value = full * rad;
        p.err = std::abs(full - coarse) * rad;
        return p;
    };
    const int nthreads = std::max(1, cfg.threads);
    auto run_batch = [&](const std::vector<std::pair<double, double>>& jobs) {
        std::vector<Panel> res(jobs.size());
        out.n_evals += static_cast<long>(jobs.size()) * (N + 1);
        if (nthreads <= 1 || jobs.size() <= 1) {
            for (size_t j = 0; j < jobs.size(); ++j)
                res[j] = eval_panel(jobs[j].first, jobs[j].second);
            return res;
        }
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        const int nt = std::min<int>(nthreads, static_cast<int>(jobs.size()));
        pool.reserve(static_cast<size_t>(nt));
        for (int k = 0; k < nt; ++k)
            pool.emplace_back([&] {
                for (size_t j; (j = next.fetch_add(1)) < jobs.size();)
                    res[j] = eval_panel(jobs[j].first, jobs[j].second);
            });
        for (auto& th : pool) th.join();
        return res;
    };

    // one starting panel per segment (contour builders pre-split long runs)
    std::vector<std::pair<double, double>> init;
    for (size_t k = 0; k < path.segments.size(); ++k)
        init.emplace_back(static_cast<double>(k), static_cast<double>(k + 1));
    std::vector<Panel> panels = run_batch(init);

    auto totals = [&]() {
        cplx v = 0.0;
        double e = 0.0;
        for (const Panel& p : panels) {
            v += p.value;
            e += p.err;
        }
        return std::pair<cplx, double>(v, e);
    };

    int splits = 0;
    while (splits < cfg.max_subdivisions) {
        auto [v, e] = totals();
        if (e <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(v))) break;
        // bisect the worst panels (deterministic order: error, then s0)
        const int batch = std::min(cfg.max_subdivisions - splits, std::max(1, nthreads));
        std::vector<size_t> order(panels.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (panels[a].err != panels[b].err) return panels[a].err > panels[b].err;
            return panels[a].s0 < panels[b].s0;
        });
        std::vector<std::pair<double, double>> jobs;
        std::vector<size_t> victims;
        for (int k = 0; k < batch && k < static_cast<int>(order.size()); ++k) {
            const Panel& w = panels[order[static_cast<size_t>(k)]];
            if (w.s1 - w.s0 < 1e-12) continue;
            const double smid = 0.5 * (w.s0 + w.s1);
            jobs.emplace_back(w.s0, smid);
            jobs.emplace_back(smid, w.s1);
            victims.push_back(order[static_cast<size_t>(k)]);
        }
        if (jobs.empty()) break;
        std::vector<Panel> fresh = run_batch(jobs);
        std::sort(victims.begin(), victims.end(), std::greater<size_t>());
        for (size_t vi : victims) panels.erase(panels.begin() + static_cast<long>(vi));
        for (auto& pn : fresh) panels.push_back(pn);
        splits += static_cast<int>(victims.size());
    }

    std::sort(panels.begin(), panels.end(),
              [](const Panel& a, const Panel& b) { return a.s0 < b.s0; });
    cplx v = 0.0;
    double e = 0.0;
    for (const Panel& p : panels) {
        v += p.value;
        e += p.err;
    }
    out.value = v;
    out.err_estimate = e;
    if (e > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(v)) && splits >= cfg.max_subdivisions)
        out.warnings.push_back("integrate_path: tolerance not met after max subdivisions");
    return out;
}

IntegralResult integrate_product(const ProductIntegrand& f, std::span<const Path> vars,
                                 const QuadConfig& cfg) {
    IntegralResult out;
    const int l = static_cast<int>(vars.size());
    if (l == 0) {
        out.value = 1.0;  // empty integral convention
        return out;
    }
    if (l > 3) throw DivergenceError("integrate_product: more than 3 variables not supported");

    std::vector<cplx> t(static_cast<size_t>(l));
    double inner_rel_err = 0.0;
    long evals = 0;
    std::vector<std::string> warnings;

    // level k integrates variable k; innermost is 0
    std::function<IntegralResult(int)> level = [&](int k) -> IntegralResult {
        if (k == 0) {
            return integrate_path(
                [&](cplx tv, double) {
                    t[0] = tv;
                    ++evals;
                    return f(t);
                },
                vars[0], cfg);
        }
        return integrate_path(
            [&](cplx tv, double) {
                t[static_cast<size_t>(k)] = tv;
                IntegralResult inner = level(k - 1);
                if (std::abs(inner.value) > 0)
                    inner_rel_err = std::max(inner_rel_err,
                                             inner.err_estimate / std::abs(inner.value));
                for (auto& w : inner.warnings) warnings.push_back(std::move(w));
                return inner.value;
            },
            vars[static_cast<size_t>(k)], cfg);
    };

    IntegralResult top = level(l - 1);
    out.value = top.value;
    out.err_estimate = top.err_estimate + inner_rel_err * std::abs(top.value);
    out.n_evals = evals;
    std::set<std::string> dedup(warnings.begin(), warnings.end());
    for (auto& w : top.warnings) dedup.insert(std::move(w));
    out.warnings.assign(dedup.begin(), dedup.end());
    return out;
}

}  // namespace qhd
