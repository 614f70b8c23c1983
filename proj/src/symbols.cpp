#include "wander/symbols.hpp"

#include <cctype>
#include <charconv>

namespace wander {

std::string branch_name(Branch b) {
    switch (b) {
        case Branch::Core: return "Core";
        case Branch::G: return "G";
        case Branch::B: return "B";
    }
    throw std::logic_error("bad branch");
}

DomainSymbol DomainSymbol::g(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("G(k) requires k >= 1");
    return {Branch::G, k};
}

DomainSymbol DomainSymbol::b(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("B(k) requires k >= 1");
    return {Branch::B, k};
}

std::string DomainSymbol::str() const {
    if (branch == Branch::Core) return "Core";
    return branch_name(branch) + "(" + std::to_string(k) + ")";
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::optional<DomainSymbol> parse_symbol(const std::string& text) {
    if (text == "Core" || text == "core") return DomainSymbol::core();
    if (text.size() < 3) return std::nullopt;
    Branch br;
    if (text[0] == 'G') br = Branch::G;
    else if (text[0] == 'B') br = Branch::B;
    else return std::nullopt;

    std::string_view rest(text);
    rest.remove_prefix(1);
    if (rest.front() == ':') {
        rest.remove_prefix(1);
    } else if (rest.front() == '(' && rest.back() == ')') {
        rest.remove_prefix(1);
        rest.remove_suffix(1);
    } else {
        return std::nullopt;
    }
    auto k = parse_int(rest);
    if (!k || *k < 1) return std::nullopt;
    return DomainSymbol{br, *k};
}

std::string AffineInt::str() const {
    if (slope == 0) return std::to_string(offset);
    if (slope < 0) return "-(" + AffineInt{-slope, -offset}.str() + ")";
    std::string s = (slope == 1) ? "k" : std::to_string(slope) + "k";
    if (offset > 0) s += "+" + std::to_string(offset);
    if (offset < 0) s += std::to_string(offset);
    return s;
}

std::optional<AffineInt> AffineInt::parse(const std::string& text) {
    std::string_view s(text);
    if (s.empty()) return std::nullopt;
    if (s.starts_with("-(") && s.ends_with(")")) {
        auto inner = AffineInt::parse(std::string(s.substr(2, s.size() - 3)));
        if (!inner) return std::nullopt;
        return AffineInt{-inner->slope, -inner->offset};
    }
    auto kpos = s.find('k');
    if (kpos == std::string_view::npos) {
        auto v = parse_int(s);
        if (!v) return std::nullopt;
        return AffineInt{0, *v};
    }
    std::int64_t slope = 1;
    std::string_view head = s.substr(0, kpos);
    if (head == "-") slope = -1;
    else if (!head.empty()) {
        auto v = parse_int(head);
        if (!v) return std::nullopt;
        slope = *v;
    }
    std::int64_t offset = 0;
    std::string_view tail = s.substr(kpos + 1);
    if (!tail.empty()) {
        if (tail.front() == '+') tail.remove_prefix(1);
        auto v = parse_int(tail);
        if (!v) return std::nullopt;
        offset = *v;
    }
    return AffineInt{slope, offset};
}

std::optional<DomainSymbol> SymbolExpr::at(std::int64_t k) const {
    if (branch == Branch::Core) return DomainSymbol::core();
    std::int64_t j = index.at(k);
    if (j < 1) return std::nullopt;
    return DomainSymbol{branch, j};
}

std::string SymbolExpr::str() const {
    if (branch == Branch::Core) return "Core";
    return branch_name(branch) + "(" + index.str() + ")";
}

std::optional<SymbolExpr> SymbolExpr::parse(const std::string& text) {
    if (text == "Core") return SymbolExpr{Branch::Core, {0, 0}};
    if (text.size() < 3 || text[1] != '(' || text.back() != ')') return std::nullopt;
    Branch br;
    if (text[0] == 'G') br = Branch::G;
    else if (text[0] == 'B') br = Branch::B;
    else return std::nullopt;
    auto idx = AffineInt::parse(text.substr(2, text.size() - 3));
    if (!idx) return std::nullopt;
    return SymbolExpr{br, *idx};
}

std::optional<TargetDisk> disk_from_center(std::int64_t center) {
    if (center == 2) return TargetDisk{2, DomainSymbol::core()};
    if (center > 2 && (center - 2) % 4 == 0)
        return TargetDisk{center, DomainSymbol::g((center - 2) / 4)};
    if (center < 0 && (-center - 2) % 4 == 0 && (-center - 2) / 4 >= 1)
        return TargetDisk{center, DomainSymbol::b((-center - 2) / 4)};
    return std::nullopt;
}

TargetDisk disk_from_center_checked(std::int64_t center) {
    auto d = disk_from_center(center);
    if (!d)
        throw std::invalid_argument("disk center " + std::to_string(center) +
                                    " lies inside no component");
    return *d;
}

std::optional<SymbolExpr> symbol_of_affine_center(const AffineInt& center) {
    if (center.slope == 0) {
        auto d = disk_from_center(center.offset);
        if (!d) return std::nullopt;
        if (d->containing.branch == Branch::Core) return SymbolExpr{Branch::Core, {0, 0}};
        return SymbolExpr{d->containing.branch, {0, d->containing.k}};
    }
    if (center.slope == 4 && (center.offset - 2) % 4 == 0)
        return SymbolExpr{Branch::G, {1, (center.offset - 2) / 4}};
    if (center.slope == -4 && (-center.offset - 2) % 4 == 0)
        return SymbolExpr{Branch::B, {1, (-center.offset - 2) / 4}};
    return std::nullopt;
}

}  // namespace wander
