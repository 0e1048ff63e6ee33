#include "cartan/detail/lexer.hpp"

#include <cctype>

namespace cartan::detail {

std::vector<Token> tokenize(std::string_view text)
{
	std::vector<Token> out;
	std::size_t i = 0;
	while (i < text.size()) {
		auto c = static_cast<unsigned char>(text[i]);
		int col = static_cast<int>(i) + 1;
		if (std::isspace(c)) {
			++i;
		} else if (std::isalpha(c) || c == '_') {
			std::size_t j = i;
			while (j < text.size() &&
			       (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
				++j;
			out.push_back({Token::Ident, std::string(text.substr(i, j - i)), col});
			i = j;
		} else if (std::isdigit(c)) {
			std::size_t j = i;
			while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
				++j;
			out.push_back({Token::Number, std::string(text.substr(i, j - i)), col});
			i = j;
		} else if (std::string_view("+-*/^()[],=").find(static_cast<char>(c)) != std::string_view::npos) {
			out.push_back({Token::Punct, std::string(1, static_cast<char>(c)), col});
			++i;
		} else {
			throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", col);
		}
	}
	out.push_back({Token::End, "", static_cast<int>(text.size()) + 1});
	return out;
}

}  // namespace cartan::detail
