#include "nblab/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "nblab/errors.hpp"

namespace nblab {

void ZeroMultiset::insert(Complex rho, int multiplicity) {
    if (!is_finite(rho))
        throw PreconditionError("off-line zero must be finite");
    if (!(rho.real() > 0.5))
        throw PreconditionError("off-line zero must satisfy Re(rho) > 1/2");
    if (multiplicity < 1)
        throw PreconditionError("zero multiplicity must be positive");
    for (auto& z : zeros_) {
        if (z.rho == rho) {
            z.multiplicity += multiplicity;
            return;
        }
    }
    zeros_.push_back({rho, multiplicity});
}

long ZeroMultiset::total_multiplicity() const {
    long n = 0;
    for (const auto& z : zeros_) n += z.multiplicity;
    return n;
}

bool ZeroMultiset::conjugation_closed() const {
    for (const auto& z : zeros_) {
        if (z.rho.imag() == 0.0) continue;
        const Complex mate = std::conj(z.rho);
        bool found = false;
        for (const auto& w : zeros_)
            if (w.rho == mate && w.multiplicity == z.multiplicity) found = true;
        if (!found) return false;
    }
    return true;
}

ZeroMultiset ZeroMultiset::parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("multiset JSON: ") + e.what());
    }
    if (!doc.is_array())
        throw ParseError("multiset JSON: expected an array of {re, im, multiplicity}");
    ZeroMultiset ms;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("re"))
            throw ParseError("multiset JSON: each entry needs at least {re}");
        const double re = item.at("re").get<double>();
        const double im = item.value("im", 0.0);
        const int mult = item.value("multiplicity", 1);
        ms.insert(Complex(re, im), mult);
    }
    return ms;
}

ZeroMultiset ZeroMultiset::parse_inline(const std::string& text) {
    ZeroMultiset ms;
    std::string token;
    std::stringstream in(text);
    auto flush = [&](const std::string& tok) {
        if (tok.empty()) return;
        // tok = "re[+im i][:mult]"
        std::string body = tok;
        int mult = 1;
        const auto colon = body.rfind(':');
        if (colon != std::string::npos) {
            try {
                mult = std::stoi(body.substr(colon + 1));
            } catch (const std::logic_error&) {
                throw ParseError("multiset token '" + tok + "': bad multiplicity");
            }
            body = body.substr(0, colon);
        }
        double re = 0.0, im = 0.0;
        if (!body.empty() && body.back() == 'i') {
            body.pop_back();
            // split at the last +/- that is not an exponent sign or leading
            std::size_t split = std::string::npos;
            for (std::size_t k = body.size(); k-- > 1;) {
                if ((body[k] == '+' || body[k] == '-') &&
                    body[k - 1] != 'e' && body[k - 1] != 'E') {
                    split = k;
                    break;
                }
            }
            if (split == std::string::npos)
                throw ParseError("multiset token '" + tok + "': malformed complex literal");
            try {
                re = std::stod(body.substr(0, split));
                im = std::stod(body.substr(split));
            } catch (const std::logic_error&) {
                throw ParseError("multiset token '" + tok + "': malformed complex literal");
            }
        } else {
            try {
                re = std::stod(body);
            } catch (const std::logic_error&) {
                throw ParseError("multiset token '" + tok + "': malformed real literal");
            }
        }
        ms.insert(Complex(re, im), mult);
    };
    while (std::getline(in, token, ','))
        flush(token);
    return ms;
}

Complex blaschke_factor(const OffLineZero& zero, Complex s) {
    if (!is_finite(s))
        throw PreconditionError("blaschke_factor: non-finite s");
    const Complex rho = zero.rho;
    const Complex pole = 1.0 - std::conj(rho);
    const Complex den = s - pole;
    if (den == Complex(0.0, 0.0)) {
        std::ostringstream msg;
        msg << "blaschke_factor: s coincides with the pole 1 - conj(rho) of rho = ("
            << rho.real() << ", " << rho.imag() << ")";
        throw PreconditionError(msg.str());
    }
    const Complex base =
        (s - rho) / den * ((1.0 - std::conj(rho)) / rho) * std::abs(rho / (1.0 - rho));
    Complex out{1.0, 0.0};
    for (int k = 0; k < zero.multiplicity; ++k) out *= base;
    return out;
}

Complex blaschke_product(const ZeroMultiset& ms, Complex s) {
    if (ms.total_multiplicity() <= 32) {
        Complex prod{1.0, 0.0};
        for (const auto& z : ms.zeros()) prod *= blaschke_factor(z, s);
        return prod;
    }
    // log-space to avoid underflow for large multisets
    Complex log_sum{0.0, 0.0};
    for (const auto& z : ms.zeros()) {
        OffLineZero single{z.rho, 1};
        const Complex f = blaschke_factor(single, s);
        if (f == Complex(0.0, 0.0)) return {0.0, 0.0}; // s is one of the zeros
        log_sum += static_cast<double>(z.multiplicity) * std::log(f);
    }
    return std::exp(log_sum);
}

double b_at_one(const ZeroMultiset& ms) {
    double log_sum = 0.0;
    for (const auto& z : ms.zeros())
        log_sum += z.multiplicity * std::log(std::abs((1.0 - z.rho) / z.rho));
    return std::exp(log_sum);
}

double bsy_sum(const ZeroMultiset& ms) {
    double sum = 0.0;
    for (const auto& z : ms.zeros()) {
        const Complex one_minus = 1.0 - z.rho;
        if (one_minus == Complex(0.0, 0.0))
            throw PreconditionError("bsy_sum: rho = 1 makes the sum infinite");
        sum += z.multiplicity * std::log(std::abs(z.rho / one_minus));
    }
    return sum;
}

} // namespace nblab
