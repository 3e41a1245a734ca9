#include "qtrunc/boomerang.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "qtrunc/rng.hpp"

namespace qtrunc {

Alg3Result algorithm3(TruthTableCache& cache, double sigma, double tau, uint64_t seed, const Alg3Options& opt) {
    int r = cache.cipher().rounds();
    if (r < 2) throw std::invalid_argument("algorithm3 needs a cipher with at least two rounds");
    Alg3Result res;
    for (int t1 = 1; t1 < r; ++t1) {
        int t2 = r - t1;
        Alg2Options f;
        f.direction = Direction::Forward;
        f.mode = opt.mode;
        f.q_override = opt.q_override;
        f.workers = opt.workers;
        Alg2Options b = f;
        b.direction = Direction::Inverse;
        uint64_t sf = derive_seed(seed, "alg3-forward", static_cast<uint64_t>(t1));
        uint64_t sb = derive_seed(seed, "alg3-inverse", static_cast<uint64_t>(t1));

        Alg2Result fr, br;
        if (opt.workers > 1) {
            std::exception_ptr err;
            std::thread th([&] {
                try {
                    br = algorithm2(cache, t2, sigma, tau, sb, b);
                } catch (...) {
                    err = std::current_exception();
                }
            });
            fr = algorithm2(cache, t1, sigma, tau, sf, f);
            th.join();
            if (err) std::rethrow_exception(err);
        } else {
            fr = algorithm2(cache, t1, sigma, tau, sf, f);
            br = algorithm2(cache, t2, sigma, tau, sb, b);
        }
        res.attempts.push_back({t1, fr.found, br.found});
        if (fr.found && br.found) {
            res.found = true;
            res.dist.fwd = fr.td;
            res.dist.bwd = br.td;
            res.dist.t1 = t1;
            res.dist.t2 = t2;
            res.dist.sigma = sigma;
            res.dist.tau = tau;
            return res;
        }
    }
    return res;
}

QuadrupleProbability quadruple_probability(double p1, double p2, int d) {
    if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1) throw std::invalid_argument("probabilities must lie in [0, 1]");
    QuadrupleProbability q;
    q.right_rate = (p1 * p2) * (p1 * p2);
    q.baseline = std::ldexp(1.0, -d);
    q.distinguishable = q.right_rate > q.baseline;
    return q;
}

nlohmann::json to_json(const BoomerangDistinguisher& b) {
    // the baseline uses the predicted-bit count of the forward input difference,
    // which is the concrete a1
    int d = b.fwd.b.width();
    QuadrupleProbability qp = quadruple_probability(b.sigma, b.sigma, d);
    return {{"t1", b.t1},
            {"t2", b.t2},
            {"sigma", b.sigma},
            {"tau", b.tau},
            {"forward", to_json(b.fwd)},
            {"inverse", to_json(b.bwd)},
            {"right_rate_formula", qp.right_rate},
            {"baseline", qp.baseline},
            {"baseline_d", d}};
}

BoomerangDistinguisher boomerang_from_json(const nlohmann::json& j) {
    BoomerangDistinguisher b;
    b.t1 = j.at("t1").get<int>();
    b.t2 = j.at("t2").get<int>();
    b.sigma = j.at("sigma").get<double>();
    b.tau = j.at("tau").get<double>();
    b.fwd = truncated_from_json(j.at("forward"));
    b.bwd = truncated_from_json(j.at("inverse"));
    return b;
}

nlohmann::json to_json(const Alg3Result& r) {
    nlohmann::json attempts = nlohmann::json::array();
    for (const auto& a : r.attempts)
        attempts.push_back({{"t1", a.t1}, {"forward_found", a.fwd_found}, {"inverse_found", a.bwd_found}});
    nlohmann::json j = {{"found", r.found}, {"attempts", attempts}};
    if (r.found) j["distinguisher"] = to_json(r.dist);
    return j;
}

}  // namespace qtrunc
