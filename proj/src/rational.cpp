#include "cartan/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace cartan {

Rational parse_rational(std::string_view text)
{
	std::string s(text);
	auto bad = [&] { return std::invalid_argument("malformed rational '" + s + "'"); };
	if (s.empty())
		throw bad();
	std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
	bool slash = false;
	bool digit_before = false, digit_after = false;
	for (; i < s.size(); ++i) {
		char c = s[i];
		if (c == '/') {
			if (slash)
				throw bad();
			slash = true;
		} else if (std::isdigit(static_cast<unsigned char>(c))) {
			(slash ? digit_after : digit_before) = true;
		} else {
			throw bad();
		}
	}
	if (!digit_before || (slash && !digit_after))
		throw bad();
	if (s[0] == '+')
		s.erase(0, 1);
	Rational q;
	if (slash) {
		auto pos = s.find('/');
		Integer num(s.substr(0, pos));
		Integer den(s.substr(pos + 1));
		if (den == 0)
			throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
		q = Rational(num, den);
	} else {
		q = Rational(Integer(s));
	}
	q.canonicalize();
	return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational factorial(unsigned n)
{
	Integer r = 1;
	for (unsigned k = 2; k <= n; ++k)
		r *= k;
	return Rational(r);
}

}  // namespace cartan
