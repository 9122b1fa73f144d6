#include "crfuchs/param_poly.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace crfuchs {

int ParamRing::index_of(const std::string& name) const
{
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw std::runtime_error("unknown parameter: " + name);
}

ParamRingPtr make_param_ring(std::vector<std::string> names, std::vector<int> caps, int total_cap)
{
    if (names.size() != caps.size()) throw std::runtime_error("param ring: names/caps size mismatch");
    auto r = std::make_shared<ParamRing>();
    r->names = std::move(names);
    r->caps = std::move(caps);
    r->total_cap = total_cap;
    return r;
}

ParamRingPtr make_param_ring(std::vector<std::string> names, int uniform_cap, int total_cap)
{
    std::vector<int> caps(names.size(), uniform_cap);
    return make_param_ring(std::move(names), std::move(caps), total_cap);
}

ParamPoly::ParamPoly(ParamRingPtr ring, const GaussianRational& c) : ring_(std::move(ring))
{
    if (!c.is_zero()) terms_.emplace(Expo(ring_->names.size(), 0), c);
}

ParamPoly ParamPoly::param(const ParamRingPtr& ring, int idx)
{
    ParamPoly p(ring);
    Expo e(ring->names.size(), 0);
    e[idx] = 1;
    p.add_term(e, GaussianRational(1));
    return p;
}

bool ParamPoly::within_caps(const Expo& e) const
{
    int tot = 0;
    for (size_t i = 0; i < e.size(); ++i) {
        int cap = ring_->caps[i];
        if (cap >= 0 && e[i] > cap) return false;
        tot += e[i];
    }
    return ring_->total_cap < 0 || tot <= ring_->total_cap;
}

void ParamPoly::add_term(const Expo& e, const GaussianRational& c)
{
    if (c.is_zero() || !within_caps(e)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void ParamPoly::check_ring(const ParamPoly& o) const
{
    if (ring_ == o.ring_) return;
    if (ring_ && o.ring_ && ring_->same_as(*o.ring_)) return;
    throw std::runtime_error("parameter ring mismatch");
}

bool ParamPoly::is_constant() const
{
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Expo& e = terms_.begin()->first;
    for (auto d : e)
        if (d != 0) return false;
    return true;
}

GaussianRational ParamPoly::constant_part() const
{
    Expo zero(ring_ ? ring_->names.size() : 0, 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? GaussianRational(0) : it->second;
}

int ParamPoly::degree() const
{
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int t = std::accumulate(e.begin(), e.end(), 0);
        if (t > d) d = t;
    }
    return d;
}

int ParamPoly::degree_in(int idx) const
{
    int d = -1;
    for (const auto& [e, c] : terms_)
        if (e[idx] > d) d = e[idx];
    return d;
}

ParamPoly ParamPoly::operator-() const
{
    ParamPoly r(ring_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o)
{
    check_ring(o);
    if (!ring_) ring_ = o.ring_;
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o)
{
    check_ring(o);
    if (!ring_) ring_ = o.ring_;
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b)
{
    a.check_ring(b);
    ParamPoly r(a.ring_ ? a.ring_ : b.ring_);
    if (r.ring_ && r.ring_->total_cap == 1) {
        // affine ring fast path: only constant x anything survives
        GaussianRational ca = a.constant_part(), cb = b.constant_part();
        ParamPoly::Expo zero(r.ring_->names.size(), 0);
        if (!cb.is_zero())
            for (const auto& [ea, va] : a.terms_) r.add_term(ea, va * cb);
        if (!ca.is_zero())
            for (const auto& [eb, vb] : b.terms_)
                if (eb != zero) r.add_term(eb, ca * vb);
        return r;
    }
    ParamPoly::Expo e(r.ring_ ? r.ring_->names.size() : 0, 0);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            int tot = 0;
            bool ok = true;
            for (size_t i = 0; i < e.size(); ++i) {
                e[i] = static_cast<unsigned char>(ea[i] + eb[i]);
                int cap = r.ring_->caps[i];
                if (cap >= 0 && e[i] > cap) {
                    ok = false;
                    break;
                }
                tot += e[i];
            }
            if (!ok || (r.ring_->total_cap >= 0 && tot > r.ring_->total_cap)) continue;
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

ParamPoly ParamPoly::scaled(const GaussianRational& c) const
{
    ParamPoly r(ring_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

ParamPoly ParamPoly::inv() const
{
    GaussianRational c = constant_part();
    if (c.is_zero()) throw std::runtime_error("ParamPoly::inv: constant part is zero");
    // x = c(1+u), u nilpotent: 1/x = (1/c) sum (-u)^k
    ParamPoly u = scaled(c.inv());
    u -= ParamPoly(ring_, GaussianRational(1));
    ParamPoly acc(ring_, c.inv());
    ParamPoly pw(ring_, c.inv());
    ParamPoly neg_u = -u;
    while (true) {
        pw = pw * neg_u;
        if (pw.is_zero()) break;
        acc += pw;
    }
    return acc;
}

ParamPoly ParamPoly::conj() const
{
    ParamPoly r(ring_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.conj());
    return r;
}

ParamPoly ParamPoly::eval_partial(const std::map<int, GaussianRational>& values) const
{
    ParamPoly r(ring_);
    for (const auto& [e, c] : terms_) {
        GaussianRational v = c;
        Expo enew = e;
        for (const auto& [idx, val] : values) {
            if (e[idx] == 0) continue;
            v *= val.pow(e[idx]);
            enew[idx] = 0;
        }
        r.add_term(enew, v);
    }
    return r;
}

bool ParamPoly::operator==(const ParamPoly& o) const
{
    return terms_ == o.terms_;
}

std::string ParamPoly::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) {
                os << "*" << ring_->names[i];
                if (e[i] > 1) os << "^" << int(e[i]);
            }
    }
    return os.str();
}

} // namespace crfuchs
