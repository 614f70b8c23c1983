#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace wander {

// Symbolic alphabet for the Fatou-component model.  Core stands for the
// whole absorbing union G0 u (U_k L_k u M_k); G(k) and B(k) are the indexed
// right/left component families, k >= 1.
enum class Branch { Core, G, B };

std::string branch_name(Branch b);

struct DomainSymbol {
    Branch branch = Branch::Core;
    std::int64_t k = 0;  // 0 for Core, >= 1 otherwise

    static DomainSymbol core() { return {Branch::Core, 0}; }
    static DomainSymbol g(std::int64_t k);
    static DomainSymbol b(std::int64_t k);

    friend auto operator<=>(const DomainSymbol&, const DomainSymbol&) = default;

    std::string str() const;  // "Core", "G(5)", "B(1)"
};

// Parses "Core", "G(5)"/"B(3)" and the CLI spelling "G:5"/"B:3".
std::optional<DomainSymbol> parse_symbol(const std::string& text);

// Integer-affine expression slope*k + offset.  All table centers and index
// shifts live in this form; centers are exact integers, never floats.
struct AffineInt {
    std::int64_t slope = 0;
    std::int64_t offset = 0;

    std::int64_t at(std::int64_t k) const { return slope * k + offset; }
    bool is_constant() const { return slope == 0; }

    friend auto operator<=>(const AffineInt&, const AffineInt&) = default;

    // "2", "-10", "4k+10", "4k-10", "-(4k+10)", "-(4k)"
    std::string str() const;
    static std::optional<AffineInt> parse(const std::string& text);
};

// Symbol-valued affine expression: a branch plus an affine index.
// Index slope is 0 (constant target like B(2)) or 1 (shifted like B(k+2)).
struct SymbolExpr {
    Branch branch = Branch::Core;
    AffineInt index{0, 0};

    std::optional<DomainSymbol> at(std::int64_t k) const;

    friend auto operator<=>(const SymbolExpr&, const SymbolExpr&) = default;

    std::string str() const;  // "Core", "G(2)", "B(k+2)", "G(k-1)"
    static std::optional<SymbolExpr> parse(const std::string& text);
};

// A radius-1/2 disk statement "|F(z) - center| < 1/2" together with the
// component the disk sits inside.  Radius is fixed by construction.
inline constexpr double kTargetDiskRadius = 0.5;

struct TargetDisk {
    std::int64_t center = 0;  // real integer in this system
    DomainSymbol containing;

    friend auto operator<=>(const TargetDisk&, const TargetDisk&) = default;
};

// Component centers are 2, 4j+2 and -(4j+2); a radius-1/2 disk about an
// integer center fits inside a component iff the center is one of those.
std::optional<TargetDisk> disk_from_center(std::int64_t center);

// Throwing variant for rows that must land inside a component.
TargetDisk disk_from_center_checked(std::int64_t center);

// Lifts an affine center to the symbol family it lands in, e.g.
// -(4k+10) -> B(k+2), 4k-10 -> G(k-3), -6 -> B(1).  Empty if the
// center cannot sit inside a component for large k.
std::optional<SymbolExpr> symbol_of_affine_center(const AffineInt& center);

}  // namespace wander
