#include "cartan/matrix.hpp"

#include "cartan/detail/lexer.hpp"

#include <cctype>
#include <stdexcept>

namespace cartan {

PolyMatrix PolyMatrix::identity(std::size_t n)
{
	PolyMatrix m(n, n);
	for (std::size_t i = 0; i < n; ++i)
		m(i, i) = Poly(1);
	return m;
}

PolyMatrix PolyMatrix::from_rows(const std::vector<std::vector<Poly>>& rows)
{
	std::size_t cols = rows.empty() ? 0 : rows.front().size();
	PolyMatrix m(rows.size(), cols);
	for (std::size_t r = 0; r < rows.size(); ++r) {
		if (rows[r].size() != cols)
			throw std::invalid_argument("ragged matrix rows");
		for (std::size_t c = 0; c < cols; ++c)
			m(r, c) = rows[r][c];
	}
	return m;
}

bool PolyMatrix::is_zero() const
{
	for (const auto& p : data_)
		if (!p.is_zero())
			return false;
	return true;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& o)
{
	if (rows_ != o.rows_ || cols_ != o.cols_)
		throw std::invalid_argument("matrix shape mismatch");
	for (std::size_t i = 0; i < data_.size(); ++i)
		data_[i] += o.data_[i];
	return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& o)
{
	if (rows_ != o.rows_ || cols_ != o.cols_)
		throw std::invalid_argument("matrix shape mismatch");
	for (std::size_t i = 0; i < data_.size(); ++i)
		data_[i] -= o.data_[i];
	return *this;
}

PolyMatrix& PolyMatrix::operator*=(const Poly& s)
{
	for (auto& p : data_)
		p *= s;
	return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b)
{
	if (a.cols_ != b.rows_)
		throw std::invalid_argument("matrix shape mismatch");
	PolyMatrix r(a.rows_, b.cols_);
	for (std::size_t i = 0; i < a.rows_; ++i)
		for (std::size_t k = 0; k < a.cols_; ++k) {
			const Poly& x = a(i, k);
			if (x.is_zero())
				continue;
			for (std::size_t j = 0; j < b.cols_; ++j)
				if (!b(k, j).is_zero())
					r(i, j) += x * b(k, j);
		}
	return r;
}

PolyMatrix PolyMatrix::operator-() const
{
	return map([](const Poly& p) { return -p; });
}

PolyMatrix commutator(const PolyMatrix& a, const PolyMatrix& b) { return a * b - b * a; }

PolyMatrix substitute(const PolyMatrix& m, const std::map<Var, Poly>& bindings)
{
	return m.map([&](const Poly& p) { return substitute_simultaneous(p, bindings); });
}

PolyMatrix diff(const PolyMatrix& m, Var v)
{
	return m.map([&](const Poly& p) { return diff(p, v); });
}

std::string to_string(const PolyMatrix& m)
{
	std::string s = "[";
	for (std::size_t r = 0; r < m.rows(); ++r) {
		s += r ? ", [" : "[";
		for (std::size_t c = 0; c < m.cols(); ++c)
			s += (c ? ", " : "") + to_string(m(r, c));
		s += "]";
	}
	return s + "]";
}

PolyMatrix parse_matrix(std::string_view text)
{
	// Split on brackets and top-level commas; entries use the polynomial grammar.
	std::size_t i = 0;
	auto skip = [&] {
		while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
			++i;
	};
	auto expect = [&](char ch) {
		skip();
		if (i >= text.size() || text[i] != ch)
			throw ParseError(std::string("expected '") + ch + "' in matrix", static_cast<int>(i) + 1);
		++i;
	};
	std::vector<std::vector<Poly>> rows;
	expect('[');
	skip();
	if (i < text.size() && text[i] == ']') {
		++i;
		return PolyMatrix();
	}
	for (;;) {
		expect('[');
		std::vector<Poly> row;
		for (;;) {
			std::size_t start = i;
			int depth = 0;
			while (i < text.size()) {
				char ch = text[i];
				if (ch == '(')
					++depth;
				else if (ch == ')')
					--depth;
				else if (depth == 0 && (ch == ',' || ch == ']'))
					break;
				++i;
			}
			if (i >= text.size())
				throw ParseError("unterminated matrix row", static_cast<int>(start) + 1);
			try {
				row.push_back(parse_poly(text.substr(start, i - start)));
			} catch (const ParseError& e) {
				throw ParseError(std::string("matrix entry: ") + e.what(), static_cast<int>(start) + e.column);
			}
			if (text[i++] == ']')
				break;
		}
		rows.push_back(std::move(row));
		skip();
		if (i < text.size() && text[i] == ',') {
			++i;
			continue;
		}
		expect(']');
		break;
	}
	skip();
	if (i != text.size())
		throw ParseError("trailing text after matrix", static_cast<int>(i) + 1);
	try {
		return PolyMatrix::from_rows(rows);
	} catch (const std::invalid_argument& e) {
		throw ParseError(e.what(), 1);
	}
}

PolyMatrix inverse_rational(const PolyMatrix& m)
{
	if (!m.is_square())
		throw std::domain_error("inverse of non-square matrix");
	std::size_t n = m.rows();
	std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
	for (std::size_t r = 0; r < n; ++r) {
		for (std::size_t c = 0; c < n; ++c) {
			if (!m(r, c).is_constant())
				throw std::domain_error("inverse_rational: non-constant entry");
			a[r][c] = m(r, c).constant_term();
		}
		a[r][n + r] = 1;
	}
	for (std::size_t c = 0; c < n; ++c) {
		std::size_t p = c;
		while (p < n && is_zero(a[p][c]))
			++p;
		if (p == n)
			throw std::domain_error("singular matrix");
		std::swap(a[p], a[c]);
		Rational inv = 1 / a[c][c];
		for (auto& x : a[c])
			x *= inv;
		for (std::size_t r = 0; r < n; ++r) {
			if (r == c || is_zero(a[r][c]))
				continue;
			Rational f = a[r][c];
			for (std::size_t k = 0; k < 2 * n; ++k)
				a[r][k] -= f * a[c][k];
		}
	}
	PolyMatrix out(n, n);
	for (std::size_t r = 0; r < n; ++r)
		for (std::size_t c = 0; c < n; ++c)
			out(r, c) = Poly(a[r][n + c]);
	return out;
}

}  // namespace cartan
