#include "emut/parse.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace emut {

namespace {

struct Token {
    enum class Kind { Ident, Number, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    std::int64_t value = 0;
    int line = 0;
    int column = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws();
        Token tok;
        tok.line = line_;
        tok.column = col_;
        if (pos_ >= text_.size()) return tok;

        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                advance();
            tok.kind = Token::Kind::Ident;
            tok.text = std::string(text_.substr(start, pos_ - start));
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            std::size_t start = pos_;
            if (c == '-') advance();
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                advance();
            tok.kind = Token::Kind::Number;
            tok.text = std::string(text_.substr(start, pos_ - start));
            std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.value);
            return tok;
        }
        // Two-character arrow, otherwise single symbol.
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            tok.kind = Token::Kind::Symbol;
            tok.text = "->";
            advance();
            advance();
            return tok;
        }
        tok.kind = Token::Kind::Symbol;
        tok.text = std::string(1, c);
        advance();
        return tok;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct SyntaxFail {
    Diagnostic diag;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { cur_ = lexer_.next(); }

    ArchitectureModel parse_document() {
        ArchitectureModel model;
        expect_keyword("system");
        model.name = expect_ident("system name");
        expect_keyword("timeunit");
        model.time_unit = expect_ident("time unit");

        while (cur_.kind != Token::Kind::End) {
            if (at_keyword("param")) {
                model.parameters.push_back(parse_param());
            } else if (at_keyword("component")) {
                model.components.push_back(parse_component());
            } else if (at_keyword("connect")) {
                model.connections.push_back(parse_connect());
            } else {
                fail("'param', 'component' or 'connect'");
            }
        }
        return model;
    }

    Component parse_component() {
        expect_keyword("component");
        Component comp;
        comp.name = expect_ident("component name");
        expect_symbol("{");
        bool have_trigger = false;
        while (!at_symbol("}")) {
            if (at_keyword("trigger")) {
                consume();
                if (at_keyword("periodic")) {
                    consume();
                    comp.trigger = TriggerSpec::periodic(expect_number("period"));
                } else if (at_keyword("data")) {
                    consume();
                    comp.trigger = TriggerSpec::data(expect_ident("trigger port"));
                } else {
                    fail("'periodic' or 'data'");
                }
                have_trigger = true;
            } else if (at_keyword("exec")) {
                consume();
                comp.exec = parse_exec();
            } else if (at_keyword("energy")) {
                consume();
                comp.energy_rate = expect_number("energy rate");
            } else if (at_keyword("in")) {
                consume();
                InPort port;
                port.name = expect_ident("port name");
                if (at_symbol("=")) {
                    consume();
                    expect_keyword("param");
                    port.param = expect_ident("parameter name");
                }
                comp.in_ports.push_back(std::move(port));
            } else if (at_keyword("out")) {
                consume();
                comp.out_ports.push_back(expect_ident("port name"));
            } else if (at_keyword("mode")) {
                consume();
                expect_keyword("when");
                Mode mode;
                mode.guard_ref = expect_ident("guard reference");
                expect_keyword("in");
                mode.guard = parse_interval();
                expect_symbol(":");
                expect_keyword("exec");
                mode.exec = parse_exec();
                expect_keyword("energy");
                mode.energy_rate = expect_number("mode energy rate");
                comp.modes.push_back(std::move(mode));
            } else {
                fail("component declaration or '}'");
            }
        }
        consume();  // '}'
        if (!have_trigger)
            throw SyntaxFail{{DiagCode::SyntaxError, comp.name,
                              "component '" + comp.name + "' has no trigger",
                              cur_.line, cur_.column}};
        return comp;
    }

private:
    Parameter parse_param() {
        expect_keyword("param");
        Parameter p;
        p.name = expect_ident("parameter name");
        expect_keyword("in");
        p.domain = parse_interval();
        return p;
    }

    Connection parse_connect() {
        expect_keyword("connect");
        Connection c;
        c.source_component = expect_ident("component name");
        expect_symbol(".");
        c.source_port = expect_ident("port name");
        expect_symbol("->");
        c.sink_component = expect_ident("component name");
        expect_symbol(".");
        c.sink_port = expect_ident("port name");
        return c;
    }

    Interval parse_interval() {
        Interval iv;
        expect_symbol("[");
        iv.lo = expect_number("lower bound");
        expect_symbol(",");
        iv.hi = expect_number("upper bound");
        expect_symbol("]");
        return iv;
    }

    Interval parse_exec() {
        if (cur_.kind == Token::Kind::Number) {
            std::int64_t t = cur_.value;
            consume();
            return {t, t};
        }
        return parse_interval();
    }

    bool at_keyword(std::string_view kw) const {
        return cur_.kind == Token::Kind::Ident && cur_.text == kw;
    }
    bool at_symbol(std::string_view sym) const {
        return cur_.kind == Token::Kind::Symbol && cur_.text == sym;
    }
    void consume() { cur_ = lexer_.next(); }

    void expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) fail("'" + std::string(kw) + "'");
        consume();
    }
    void expect_symbol(std::string_view sym) {
        if (!at_symbol(sym)) fail("'" + std::string(sym) + "'");
        consume();
    }
    std::string expect_ident(std::string_view what) {
        if (cur_.kind != Token::Kind::Ident) fail(std::string(what));
        std::string text = cur_.text;
        consume();
        return text;
    }
    std::int64_t expect_number(std::string_view what) {
        if (cur_.kind != Token::Kind::Number) fail(std::string(what));
        std::int64_t v = cur_.value;
        consume();
        return v;
    }

    [[noreturn]] void fail(const std::string& expected) {
        std::string got = cur_.kind == Token::Kind::End ? "end of input"
                                                        : "'" + cur_.text + "'";
        throw SyntaxFail{{DiagCode::SyntaxError, "",
                          "expected " + expected + ", got " + got, cur_.line,
                          cur_.column}};
    }

    Lexer lexer_;
    Token cur_;
};

}  // namespace

ParseResult parse_model(std::string_view text) {
    ParseResult result;
    try {
        Parser parser(text);
        ArchitectureModel model = parser.parse_document();
        result.diagnostics = validate(model);
        if (result.diagnostics.empty()) result.model = std::move(model);
    } catch (const SyntaxFail& e) {
        result.diagnostics.push_back(e.diag);
    }
    return result;
}

namespace {

std::string interval_text(const Interval& iv) {
    return "[" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]";
}

void write_component(std::ostream& os, const Component& comp) {
    os << "component " << comp.name << " {\n";
    if (comp.trigger.is_periodic())
        os << "  trigger periodic " << comp.trigger.period << "\n";
    else
        os << "  trigger data " << comp.trigger.port << "\n";
    os << "  exec " << interval_text(comp.exec) << "\n";
    os << "  energy " << comp.energy_rate << "\n";
    for (const auto& p : comp.in_ports) {
        os << "  in " << p.name;
        if (p.param) os << " = param " << *p.param;
        os << "\n";
    }
    for (const auto& p : comp.out_ports) os << "  out " << p << "\n";
    for (const auto& m : comp.modes) {
        os << "  mode when " << m.guard_ref << " in " << interval_text(m.guard)
           << " : exec " << interval_text(m.exec) << " energy " << m.energy_rate
           << "\n";
    }
    os << "}\n";
}

}  // namespace

std::string serialize_model(const ArchitectureModel& model) {
    std::ostringstream os;
    os << "system " << model.name << " timeunit " << model.time_unit << "\n";
    for (const auto& p : model.parameters)
        os << "param " << p.name << " in " << interval_text(p.domain) << "\n";
    for (const auto& c : model.components) write_component(os, c);
    for (const auto& c : model.connections)
        os << "connect " << c.source_component << "." << c.source_port << " -> "
           << c.sink_component << "." << c.sink_port << "\n";
    return os.str();
}

std::string render_component(const Component& comp) {
    std::ostringstream os;
    write_component(os, comp);
    return os.str();
}

std::optional<Component> parse_component_block(std::string_view text) {
    try {
        Parser parser(text);
        return parser.parse_component();
    } catch (const SyntaxFail&) {
        return std::nullopt;
    }
}

std::optional<ArchitectureModel> parse_document_raw(std::string_view text) {
    try {
        Parser parser(text);
        return parser.parse_document();
    } catch (const SyntaxFail&) {
        return std::nullopt;
    }
}

}  // namespace emut
