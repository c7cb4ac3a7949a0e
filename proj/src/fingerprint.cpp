#include "palmpc/fingerprint.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "palmpc/errors.hpp"

namespace palmpc {
namespace {

bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (q % d == 0) return q == d;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  auto mulmod = [q](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<detail::u128>(a) * b % q);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e > 0; e >>= 1, a = mulmod(a, a)) {
      if (e & 1) r = mulmod(r, a);
    }
    return r;
  };
  std::uint64_t d = q - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d);
    if (x == 1 || x == q - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x);
      if (x == q - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Uniform draw from [lo, hi] by rejection; mt19937_64 output is portable,
// std::uniform_int_distribution is not.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return lo + r % span;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

std::uint64_t FingerprintScheme::pow(std::size_t k, std::uint64_t base, std::uint64_t exp) const noexcept {
  std::uint64_t r = 1 % layers_[k].modulus;
  for (; exp > 0; exp >>= 1, base = mul(k, base, base)) {
    if (exp & 1) r = mul(k, r, base);
  }
  return r;
}

void FingerprintScheme::finish_init() {
  tag_ = 0x51ed270b2a3c6f1dull;
  for (std::size_t k = 0; k < layer_count_; ++k) {
    Layer& l = layers_[k];
    l.inverse_base = pow(k, l.base, l.modulus - 2);
    tag_ = mix(mix(tag_, l.modulus), l.base);
  }
}

FingerprintScheme FingerprintScheme::create(std::uint64_t n, std::uint64_t sigma, std::size_t layers,
                                            std::uint64_t seed) {
  if (n == 0) throw UsageError("fingerprint scheme needs n >= 1");
  if (layers == 0 || layers > kMaxLayers) {
    throw UsageError("fingerprint layers must be in [1, " + std::to_string(kMaxLayers) + "]");
  }
  if (sigma > kMersenne61) throw UsageError("alphabet larger than the fingerprint modulus");
  // q^layers >= n^3, compared in logarithms.
  const double need = 3.0 * std::log2(static_cast<double>(n));
  const double have = static_cast<double>(layers) * 61.0;
  if (have < need) {
    throw UsageError("n = " + std::to_string(n) + " needs more than " + std::to_string(layers) +
                     " fingerprint layers");
  }
  FingerprintScheme s;
  s.layer_count_ = layers;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < layers; ++k) {
    s.layers_[k].modulus = kMersenne61;
    s.layers_[k].base = draw(rng, 2, kMersenne61 - 2);
  }
  s.finish_init();
  return s;
}

FingerprintScheme FingerprintScheme::with_parameters(
    std::span<const std::pair<std::uint64_t, std::uint64_t>> layers) {
  if (layers.empty() || layers.size() > kMaxLayers) throw UsageError("bad layer count");
  FingerprintScheme s;
  s.layer_count_ = layers.size();
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto [q, x] = layers[k];
    if (q >= (std::uint64_t{1} << 62) || !is_prime(q)) throw UsageError("modulus must be a prime below 2^62");
    if (x == 0 || x >= q) throw UsageError("base must lie in [1, q-1]");
    s.layers_[k].modulus = q;
    s.layers_[k].base = x;
  }
  s.finish_init();
  return s;
}

Fingerprint FingerprintScheme::empty() const noexcept {
  Fingerprint f;
  f.scheme_tag = tag_;
  return f;
}

Fingerprint FingerprintScheme::of(std::span<const Symbol> s) const {
  Fingerprint f = empty();
  f.length = s.size();
  for (std::size_t k = 0; k < layer_count_; ++k) {
    const std::uint64_t x = layers_[k].base;
    const std::uint64_t q = layers_[k].modulus;
    std::uint64_t v = 0;
    // Horner from the right end.
    for (std::size_t i = s.size(); i-- > 0;) v = add(k, mul(k, v, x), s[i] % q);
    f.value[k] = v;
    f.power[k] = pow(k, x, s.size());
    f.inverse_power[k] = pow(k, layers_[k].inverse_base, s.size());
  }
  return f;
}

Fingerprint FingerprintScheme::of_symbol(Symbol c) const {
  Fingerprint f = empty();
  f.length = 1;
  for (std::size_t k = 0; k < layer_count_; ++k) {
    f.value[k] = c % layers_[k].modulus;
    f.power[k] = layers_[k].base;
    f.inverse_power[k] = layers_[k].inverse_base;
  }
  return f;
}

Fingerprint FingerprintScheme::of_reversed(std::span<const Symbol> s) const {
  std::vector<Symbol> r(s.rbegin(), s.rend());
  return of(r);
}

Fingerprint FingerprintScheme::concat(const Fingerprint& u, const Fingerprint& v) const {
  if (u.scheme_tag != tag_ || v.scheme_tag != tag_) throw UsageError("fingerprint scheme mismatch");
  Fingerprint w = empty();
  w.length = u.length + v.length;
  for (std::size_t k = 0; k < layer_count_; ++k) {
    w.value[k] = add(k, u.value[k], mul(k, u.power[k], v.value[k]));
    w.power[k] = mul(k, u.power[k], v.power[k]);
    w.inverse_power[k] = mul(k, u.inverse_power[k], v.inverse_power[k]);
  }
  return w;
}

Fingerprint FingerprintScheme::solve_third(Missing missing, const Fingerprint& a,
                                           const Fingerprint& b) const {
  if (a.scheme_tag != tag_ || b.scheme_tag != tag_) throw UsageError("fingerprint scheme mismatch");
  if (missing == Missing::Whole) return concat(a, b);
  const Fingerprint& w = a;
  if (b.length > w.length) throw UsageError("part longer than the whole");
  Fingerprint out = empty();
  out.length = w.length - b.length;
  if (missing == Missing::Left) {
    // U = W - x^|U| V, with x^|U| = x^|W| x^-|V|.
    const Fingerprint& v = b;
    for (std::size_t k = 0; k < layer_count_; ++k) {
      out.power[k] = mul(k, w.power[k], v.inverse_power[k]);
      out.inverse_power[k] = mul(k, w.inverse_power[k], v.power[k]);
      out.value[k] = sub(k, w.value[k], mul(k, out.power[k], v.value[k]));
    }
  } else {
    // V = (W - U) x^-|U|.
    const Fingerprint& u = b;
    for (std::size_t k = 0; k < layer_count_; ++k) {
      out.power[k] = mul(k, w.power[k], u.inverse_power[k]);
      out.inverse_power[k] = mul(k, w.inverse_power[k], u.power[k]);
      out.value[k] = mul(k, sub(k, w.value[k], u.value[k]), u.inverse_power[k]);
    }
  }
  return out;
}

bool FingerprintScheme::equal(const Fingerprint& a, const Fingerprint& b) const {
  if (a.scheme_tag != tag_ || b.scheme_tag != tag_) throw UsageError("fingerprint scheme mismatch");
  if (a.length != b.length) return false;
  for (std::size_t k = 0; k < layer_count_; ++k) {
    if (a.value[k] != b.value[k]) return false;
  }
  return true;
}

FragmentHasher::FragmentHasher(const FingerprintScheme& scheme, std::span<const Symbol> letters,
                               OpTally* tally)
    : scheme_(&scheme), size_(letters.size()) {
  const std::size_t layers = scheme.layers();
  const std::size_t stride = size_ + 1;
  prefix_.assign(layers * stride, 0);
  power_.assign(layers * stride, 0);
  inverse_power_.assign(layers * stride, 0);
  for (std::size_t k = 0; k < layers; ++k) {
    const auto& l = scheme.layer(k);
    std::uint64_t* pre = prefix_.data() + k * stride;
    std::uint64_t* pw = power_.data() + k * stride;
    std::uint64_t* ipw = inverse_power_.data() + k * stride;
    pw[0] = 1;
    ipw[0] = 1;
    for (std::size_t i = 0; i < size_; ++i) {
      pre[i + 1] = scheme.add(k, pre[i], scheme.mul(k, pw[i], letters[i] % l.modulus));
      pw[i + 1] = scheme.mul(k, pw[i], l.base);
      ipw[i + 1] = scheme.mul(k, ipw[i], l.inverse_base);
    }
  }
  if (tally != nullptr) tally->add(3 * layers * size_ + 1);
}

void FragmentHasher::values(std::size_t begin, std::size_t end, std::uint64_t* out) const {
  const std::size_t stride = size_ + 1;
  for (std::size_t k = 0; k < scheme_->layers(); ++k) {
    const std::uint64_t* pre = prefix_.data() + k * stride;
    out[k] = scheme_->mul(k, scheme_->sub(k, pre[end], pre[begin]), inverse_power_[k * stride + begin]);
  }
}

Fingerprint FragmentHasher::fragment(std::size_t begin, std::size_t end) const {
  Fingerprint f = scheme_->empty();
  f.length = end - begin;
  values(begin, end, f.value.data());
  const std::size_t stride = size_ + 1;
  for (std::size_t k = 0; k < scheme_->layers(); ++k) {
    f.power[k] = power_[k * stride + f.length];
    f.inverse_power[k] = inverse_power_[k * stride + f.length];
  }
  return f;
}

}  // namespace palmpc
