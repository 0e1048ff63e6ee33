#pragma once

#include "cartan/poly.hpp"

#include <map>
#include <string>
#include <vector>

namespace cartan {

/// Dense matrix with polynomial entries, row-major.
class PolyMatrix {
public:
	PolyMatrix() = default;
	PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
	static PolyMatrix identity(std::size_t n);
	static PolyMatrix from_rows(const std::vector<std::vector<Poly>>& rows);

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }
	Poly& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
	const Poly& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

	bool is_zero() const;
	bool is_square() const { return rows_ == cols_; }

	PolyMatrix& operator+=(const PolyMatrix& o);
	PolyMatrix& operator-=(const PolyMatrix& o);
	PolyMatrix& operator*=(const Poly& s);
	friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
	friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
	friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
	friend PolyMatrix operator*(const Poly& s, PolyMatrix a) { return a *= s; }
	friend PolyMatrix operator*(PolyMatrix a, const Poly& s) { return a *= s; }
	PolyMatrix operator-() const;

	friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

	/// Applies f to every entry.
	template <class F>
	PolyMatrix map(F&& f) const
	{
		PolyMatrix r(rows_, cols_);
		for (std::size_t i = 0; i < data_.size(); ++i)
			r.data_[i] = f(data_[i]);
		return r;
	}

private:
	std::size_t rows_ = 0, cols_ = 0;
	std::vector<Poly> data_;
};

PolyMatrix commutator(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix substitute(const PolyMatrix& m, const std::map<Var, Poly>& bindings);
PolyMatrix diff(const PolyMatrix& m, Var v);

/// "[[1/4, 0], [0, -1/4]]"
std::string to_string(const PolyMatrix& m);
PolyMatrix parse_matrix(std::string_view text);

/// Inverse of a matrix with rational entries; throws std::domain_error if singular or non-constant.
PolyMatrix inverse_rational(const PolyMatrix& m);

}  // namespace cartan
