#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "fullgroup/backend.hpp"
#include "fullgroup/clopen.hpp"
#include "fullgroup/element.hpp"
#include "fullgroup/error.hpp"
#include "fullgroup/rational.hpp"

// Compact text encodings:
//   clopen set   b2:{00,01,1}   b2:{}   b2:{ε}
//   odometer     odo2:[(00;+1),(01;-1)]
//   full shift   shift2:[(0>11),(11>0),(10>10)]
//   element      elem:odo2:[...]   (the elem: header is optional on input)

namespace fullgroup {

namespace detail {

inline int parse_int(std::string_view s, const char* what) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw MalformedInput(std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

inline std::int64_t parse_power(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw MalformedInput("bad odometer power '" + std::string(s) + "'");
    return v;
}

/// Splits "a,b,c" at top-level commas (none inside parentheses).
inline std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    if (s.empty()) return out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == ',' && depth == 0) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    out.push_back(s.substr(start));
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline std::string encode(const ClopenSet& a) {
    std::string out = "b" + std::to_string(a.base()) + ":{";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ',';
        out += a.cylinders()[i].text();
    }
    return out + "}";
}

/// Parses `bN:{...}` and canonicalizes (redundant input is accepted).
inline ClopenSet parse_clopen(std::string_view text) {
    auto s = detail::trim(text);
    auto colon = s.find(':');
    if (s.size() < 5 || s.front() != 'b' || colon == std::string_view::npos || s.substr(colon + 1, 1) != "{" ||
        s.back() != '}')
        throw MalformedInput("clopen set must look like b2:{00,1}, got '" + std::string(text) + "'");
    const int base = detail::parse_int(s.substr(1, colon - 1), "base");
    check_base(base);
    std::vector<Word> ws;
    for (auto part : detail::split_list(s.substr(colon + 2, s.size() - colon - 3))) {
        part = detail::trim(part);
        if (part.empty()) throw MalformedInput("empty cylinder in '" + std::string(text) + "'");
        ws.push_back(Word::parse(part, base));
    }
    return canonicalize(base, std::move(ws));
}

inline std::string encode_piece(const OdometerPiece& p) {
    return "(" + p.source.text() + ";" + (p.power >= 0 ? "+" : "") + std::to_string(p.power) + ")";
}

inline std::string encode_piece(const ShiftPiece& p) { return "(" + p.source.text() + ">" + p.target.text() + ")"; }

template <class B>
std::string encode(const Bisection<B>& u) {
    std::string out = u.backend().tag() + ":[";
    for (std::size_t i = 0; i < u.pieces.size(); ++i) {
        if (i) out += ',';
        out += encode_piece(u.pieces[i]);
    }
    return out + "]";
}

template <class B>
std::string encode(const Element<B>& f) {
    return "elem:" + encode(f.bisection());
}

/// Backend named by the tag at the start of a bisection or element
/// encoding ("odo2:", "elem:shift3:", ...).
inline BackendId parse_backend_tag(std::string_view text) {
    auto s = detail::trim(text);
    if (s.starts_with("elem:")) s.remove_prefix(5);
    auto colon = s.find(':');
    if (colon == std::string_view::npos) throw MalformedInput("missing backend tag in '" + std::string(text) + "'");
    auto tag = s.substr(0, colon);
    BackendId id{BackendKind::Odometer, 0};
    if (tag.starts_with("odo")) {
        tag.remove_prefix(3);
    } else if (tag.starts_with("shift")) {
        id.kind = BackendKind::FullShift;
        tag.remove_prefix(5);
    } else {
        throw MalformedInput("unknown backend tag '" + std::string(s.substr(0, colon)) + "'");
    }
    id.base = detail::parse_int(tag, "base");
    check_base(id.base);
    return id;
}

template <class B>
Bisection<B> parse_bisection(std::string_view text) {
    auto s = detail::trim(text);
    if (s.starts_with("elem:")) s.remove_prefix(5);
    const auto id = parse_backend_tag(s);
    if (id.kind != B::kind)
        throw MalformedInput("expected a " + std::string(B::prefix) + " encoding, got '" + std::string(text) + "'");
    auto colon = s.find(':');
    auto body = s.substr(colon + 1);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw MalformedInput("piece list must be bracketed: '" + std::string(text) + "'");
    Bisection<B> u{id.base, {}};
    for (auto part : detail::split_list(body.substr(1, body.size() - 2))) {
        part = detail::trim(part);
        if (part.size() < 3 || part.front() != '(' || part.back() != ')')
            throw MalformedInput("bad piece '" + std::string(part) + "'");
        part = part.substr(1, part.size() - 2);
        if constexpr (is_odometer<B>) {
            auto semi = part.find(';');
            if (semi == std::string_view::npos) throw MalformedInput("odometer piece needs ';': '" + std::string(part) + "'");
            u.pieces.push_back({Word::parse(part.substr(0, semi), id.base), detail::parse_power(part.substr(semi + 1))});
        } else {
            auto gt = part.find('>');
            if (gt == std::string_view::npos) throw MalformedInput("shift piece needs '>': '" + std::string(part) + "'");
            u.pieces.push_back({Word::parse(part.substr(0, gt), id.base), Word::parse(part.substr(gt + 1), id.base)});
        }
    }
    if (auto bad = validate_bisection(u)) throw MalformedInput("not a bisection: " + bad->describe());
    return u;
}

template <class B>
Element<B> parse_element(std::string_view text) {
    return Element<B>::from_bisection(parse_bisection<B>(text));
}

}  // namespace fullgroup
