#include "cartan/symbol.hpp"

#include <cctype>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <memory>

namespace cartan {

struct Var::Entry {
	std::string name;
	VarKind kind;
	std::string stem;
	int index;
};

namespace {

// Entries are never freed; Var holds a raw pointer into this table.
struct Registry {
	std::mutex mutex;
	std::unordered_map<std::string, std::unique_ptr<Var::Entry>> entries;
};

Registry& registry()
{
	static Registry r;
	return r;
}

void split_natural(std::string_view name, std::string& stem, int& index)
{
	std::size_t cut = name.size();
	while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1])))
		--cut;
	stem.assign(name.substr(0, cut));
	if (cut == name.size() || name.size() - cut > 9)
		index = -1;
	else
		index = std::stoi(std::string(name.substr(cut)));
}

VarKind infer_kind(std::string_view name)
{
	if (name == "x" || name == "t")
		return VarKind::Base;
	if (!name.empty() && std::isupper(static_cast<unsigned char>(name[0])))
		return VarKind::Generator;
	auto digits_after = [&](char c) {
		if (name.size() < 2 || name[0] != c)
			return false;
		for (std::size_t i = 1; i < name.size(); ++i)
			if (!std::isdigit(static_cast<unsigned char>(name[i])))
				return false;
		return true;
	};
	if (digits_after('u'))
		return VarKind::Jet;
	if (digits_after('a'))
		return VarKind::Group;
	return VarKind::Parameter;
}

const Var::Entry* intern(std::string_view name, const VarKind* kind)
{
	auto& reg = registry();
	std::lock_guard lock(reg.mutex);
	auto it = reg.entries.find(std::string(name));
	if (it != reg.entries.end()) {
		if (kind && it->second->kind != *kind)
			throw std::invalid_argument("symbol '" + std::string(name) + "' already declared as " +
			                            to_string(it->second->kind));
		return it->second.get();
	}
	if (name != "_" && !is_identifier(name))
		throw std::invalid_argument("invalid symbol name '" + std::string(name) + "'");
	auto e = std::make_unique<Var::Entry>();
	e->name = std::string(name);
	e->kind = kind ? *kind : infer_kind(name);
	split_natural(name, e->stem, e->index);
	if (e->kind == VarKind::Base) {
		// x before t before any other base coordinate
		if (name == "x" || name == "t") {
			e->index = name == "x" ? 0 : 1;
			e->stem.clear();
		}
	}
	auto* raw = e.get();
	reg.entries.emplace(raw->name, std::move(e));
	return raw;
}

}  // namespace

const char* to_string(VarKind kind)
{
	switch (kind) {
	case VarKind::Base: return "base";
	case VarKind::Jet: return "jet";
	case VarKind::Group: return "group";
	case VarKind::Parameter: return "parameter";
	case VarKind::Atom: return "atom";
	case VarKind::Generator: return "generator";
	}
	return "?";
}

bool is_identifier(std::string_view name)
{
	if (name.empty())
		return false;
	auto c0 = static_cast<unsigned char>(name[0]);
	if (!(std::isalpha(c0) || c0 == '_'))
		return false;
	for (char c : name)
		if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
			return false;
	return true;
}

Var::Var() : entry_(intern("_", nullptr)) {}

Var Var::named(std::string_view name) { return Var(intern(name, nullptr)); }

std::optional<Var> Var::lookup(std::string_view name)
{
	auto& reg = registry();
	std::lock_guard lock(reg.mutex);
	auto it = reg.entries.find(std::string(name));
	if (it == reg.entries.end())
		return std::nullopt;
	return Var(it->second.get());
}

Var Var::make(std::string_view name, VarKind kind) { return Var(intern(name, &kind)); }

Var Var::jet(int order) { return make("u" + std::to_string(order), VarKind::Jet); }

Var Var::group(int index) { return make("a" + std::to_string(index), VarKind::Group); }

const std::string& Var::name() const { return entry_->name; }
VarKind Var::kind() const { return entry_->kind; }
int Var::index() const { return entry_->index; }

std::strong_ordering operator<=>(Var a, Var b)
{
	if (a.entry_ == b.entry_)
		return std::strong_ordering::equal;
	const auto& x = *a.entry_;
	const auto& y = *b.entry_;
	if (auto c = x.kind <=> y.kind; c != 0)
		return c;
	if (auto c = x.stem.compare(y.stem); c != 0)
		return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
	if (auto c = x.index <=> y.index; c != 0)
		return c;
	auto c = x.name.compare(y.name);
	return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

}  // namespace cartan
