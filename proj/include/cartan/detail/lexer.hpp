#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cartan {

/// Raised by every text parser; carries a 1-based column within the parsed string.
struct ParseError : std::runtime_error {
	ParseError(const std::string& what, int column)
	    : std::runtime_error(what + " (column " + std::to_string(column) + ")"), column(column)
	{
	}
	int column;
};

namespace detail {

struct Token {
	enum Kind { Ident, Number, Punct, End } kind;
	std::string text;
	int column;
};

std::vector<Token> tokenize(std::string_view text);

/// Cursor over a token list with the small helpers the recursive-descent parsers share.
class TokenStream {
public:
	explicit TokenStream(std::string_view text) : tokens_(tokenize(text)) {}

	const Token& peek(std::size_t ahead = 0) const
	{
		std::size_t i = pos_ + ahead;
		return i < tokens_.size() ? tokens_[i] : tokens_.back();
	}
	const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
	bool at_end() const { return peek().kind == Token::End; }
	bool accept(std::string_view punct)
	{
		if (peek().kind == Token::Punct && peek().text == punct) {
			++pos_;
			return true;
		}
		return false;
	}
	void expect(std::string_view punct)
	{
		if (!accept(punct))
			fail("expected '" + std::string(punct) + "'");
	}
	[[noreturn]] void fail(const std::string& msg) const
	{
		const auto& t = peek();
		throw ParseError(msg + (t.kind == Token::End ? " at end of input" : " near '" + t.text + "'"),
		                 t.column);
	}

private:
	std::vector<Token> tokens_;
	std::size_t pos_ = 0;
};

}  // namespace detail
}  // namespace cartan
