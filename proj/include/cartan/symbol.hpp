#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace cartan {

/// Role of a symbol. The enumerator order is the canonical variable order:
/// base coordinates first, then jet coordinates by derivative order, group
/// coordinates, free parameters, solver unknowns, and Lie generators.
enum class VarKind : std::uint8_t { Base, Jet, Group, Parameter, Atom, Generator };

const char* to_string(VarKind kind);

/// An interned symbol. Two Vars with the same name are the same Var; the kind
/// is fixed on first use (explicitly, or inferred from the name).
///
/// Name inference: `x` and `t` are base coordinates, `u<n>` is the jet
/// coordinate of derivative order n, `a<n>` is a group coordinate, names
/// starting with an uppercase letter are Lie generators, and everything else
/// is a parameter.
class Var {
public:
	Var();  // the placeholder symbol "_"

	static Var named(std::string_view name);
	/// Existing symbol with this name, without interning.
	static std::optional<Var> lookup(std::string_view name);
	/// Throws std::invalid_argument if `name` is already interned with another kind.
	static Var make(std::string_view name, VarKind kind);

	static Var base(std::string_view name) { return make(name, VarKind::Base); }
	static Var jet(int order);
	static Var group(int index);
	static Var parameter(std::string_view name) { return make(name, VarKind::Parameter); }
	static Var atom(std::string_view name) { return make(name, VarKind::Atom); }
	static Var generator(std::string_view name) { return make(name, VarKind::Generator); }

	const std::string& name() const;
	VarKind kind() const;
	/// Numeric suffix of the name (jet order, group index, generator index); -1 if none.
	int index() const;

	bool is_coordinate() const { return kind() <= VarKind::Group; }

	friend bool operator==(Var a, Var b) { return a.entry_ == b.entry_; }
	friend std::strong_ordering operator<=>(Var a, Var b);

	std::size_t hash() const { return std::hash<const void*>{}(entry_); }

	struct Entry;

private:
	explicit Var(const Entry* e) : entry_(e) {}
	const Entry* entry_;
};

/// [A-Za-z_][A-Za-z0-9_]*
bool is_identifier(std::string_view name);

}  // namespace cartan

template <>
struct std::hash<cartan::Var> {
	std::size_t operator()(cartan::Var v) const noexcept { return v.hash(); }
};
