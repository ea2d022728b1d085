#include "pgschema/schema_text.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "pgschema/error.hpp"

namespace pgschema {

namespace {

enum class Tok {
    Ident, Int, LBrace, RBrace, LParen, RParen, Comma, Colon, Question, Amp,
    Lt, Gt, DotDot, Star, EdgeOpen, EdgeClose, End,
};

std::string_view tok_name(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Question: return "'?'";
    case Tok::Amp: return "'&'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::DotDot: return "'..'";
    case Tok::Star: return "'*'";
    case Tok::EdgeOpen: return "'-['";
    case Tok::EdgeClose: return "']->'";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t offset;
};

struct RawError {
    std::size_t offset;
    std::string message;
    std::string expected;
};

bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view src, std::vector<RawError>& errors) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t len) {
        out.push_back({k, src.substr(i, len), i});
        i += len;
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
        } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') ++i;
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            push(Tok::Ident, j - i);
        } else if (digit(c)) {
            std::size_t j = i;
            while (j < src.size() && digit(src[j])) ++j;
            push(Tok::Int, j - i);
        } else if (src.substr(i, 2) == "-[") {
            push(Tok::EdgeOpen, 2);
        } else if (src.substr(i, 3) == "]->") {
            push(Tok::EdgeClose, 3);
        } else if (src.substr(i, 2) == "..") {
            push(Tok::DotDot, 2);
        } else {
            Tok k;
            switch (c) {
            case '{': k = Tok::LBrace; break;
            case '}': k = Tok::RBrace; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case ',': k = Tok::Comma; break;
            case ':': k = Tok::Colon; break;
            case '?': k = Tok::Question; break;
            case '&': k = Tok::Amp; break;
            case '<': k = Tok::Lt; break;
            case '>': k = Tok::Gt; break;
            case '*': k = Tok::Star; break;
            default:
                errors.push_back({i, "unexpected character '" + std::string(1, c) + "'", ""});
                ++i;
                continue;
            }
            push(k, 1);
        }
    }
    out.push_back({Tok::End, {}, src.size()});
    return out;
}

struct RawName {
    std::string text;
    LabelSet labels;
    std::size_t offset;
};

struct RawProp {
    PropertyDef def;
    std::size_t offset;
};

struct RawNode {
    RawName name;
    std::optional<RawName> supertype;
    std::vector<RawProp> props;
};

struct RawEdge {
    RawName src;
    RawName label;
    RawName dst;
    Cardinality in_card;
    Cardinality out_card;
    std::optional<std::size_t> in_card_offset;
    std::optional<std::size_t> out_card_offset;
    std::vector<RawProp> props;
};

struct SyntaxError {
    RawError error;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<RawError>& errors)
        : toks_(std::move(tokens)), errors_(errors) {}

    void parse(std::vector<RawNode>& nodes, std::vector<RawEdge>& edges) {
        while (peek().kind != Tok::End) {
            try {
                if (is_keyword("NODE")) {
                    nodes.push_back(node());
                } else if (is_keyword("EDGE")) {
                    edges.push_back(edge());
                } else {
                    fail("expected a NODE or EDGE declaration", "NODE, EDGE");
                }
            } catch (const SyntaxError& e) {
                errors_.push_back(e.error);
                recover();
            }
        }
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool is_keyword(std::string_view kw) const {
        return peek().kind == Tok::Ident && peek().text == kw;
    }

    [[noreturn]] void fail(std::string message, std::string expected) const {
        throw SyntaxError{{peek().offset, std::move(message), std::move(expected)}};
    }

    const Token& expect(Tok kind) {
        if (peek().kind != kind) {
            std::string found = peek().kind == Tok::End ? "end of input"
                                                        : "'" + std::string(peek().text) + "'";
            fail("expected " + std::string(tok_name(kind)) + ", found " + found,
                 std::string(tok_name(kind)));
        }
        return advance();
    }

    void recover() {
        advance();
        while (peek().kind != Tok::End && !is_keyword("NODE") && !is_keyword("EDGE")) advance();
    }

    RawName name() {
        RawName out;
        const auto& first = expect(Tok::Ident);
        out.offset = first.offset;
        out.text = std::string(first.text);
        std::vector<std::string_view> parts{first.text};
        while (peek().kind == Tok::Amp) {
            advance();
            const auto& next = expect(Tok::Ident);
            out.text += "&";
            out.text += next.text;
            parts.push_back(next.text);
        }
        if (parts.size() == 1 && parts[0] == kUnlabeled) return out;
        for (auto p : parts) {
            if (p == kUnlabeled) {
                throw SyntaxError{{out.offset, "'_Unlabeled' cannot be combined with other labels", ""}};
            }
            if (!out.labels.emplace(p).second) {
                throw SyntaxError{{out.offset, "duplicate label '" + std::string(p) + "'", ""}};
            }
        }
        return out;
    }

    std::vector<RawProp> props() {
        std::vector<RawProp> out;
        expect(Tok::LBrace);
        if (peek().kind == Tok::RBrace) {
            advance();
            return out;
        }
        while (true) {
            RawProp p;
            const auto& key = expect(Tok::Ident);
            p.offset = key.offset;
            p.def.name = std::string(key.text);
            expect(Tok::Colon);
            if (peek().kind != Tok::Ident) fail("expected a datatype", "STRING, INTEGER, FLOAT, BOOLEAN, DATE, ANY");
            auto type_tok = peek();
            auto type = parse_datatype(type_tok.text);
            if (!type || type_tok.text != to_string(*type)) {
                fail("unknown datatype '" + std::string(type_tok.text) + "'",
                     "STRING, INTEGER, FLOAT, BOOLEAN, DATE, ANY");
            }
            advance();
            p.def.type = *type;
            p.def.required = true;
            if (peek().kind == Tok::Question) {
                advance();
                p.def.required = false;
            }
            out.push_back(std::move(p));
            if (peek().kind == Tok::Comma) {
                advance();
                continue;
            }
            expect(Tok::RBrace);
            return out;
        }
    }

    std::uint64_t integer() {
        const auto& t = expect(Tok::Int);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{}) {
            throw SyntaxError{{t.offset, "integer out of range", ""}};
        }
        return v;
    }

    Cardinality card() {
        Cardinality c;
        expect(Tok::Lt);
        c.min = integer();
        expect(Tok::DotDot);
        if (peek().kind == Tok::Star) {
            advance();
        } else if (peek().kind == Tok::Int) {
            c.max = integer();
        } else {
            fail("expected an upper bound", "integer or '*'");
        }
        expect(Tok::Gt);
        return c;
    }

    RawNode node() {
        advance();  // NODE
        RawNode n;
        n.name = name();
        if (peek().kind == Tok::Colon) {
            advance();
            n.supertype = name();
        }
        n.props = props();
        return n;
    }

    RawEdge edge() {
        advance();  // EDGE
        RawEdge e;
        expect(Tok::LParen);
        e.src = name();
        expect(Tok::RParen);
        expect(Tok::EdgeOpen);
        e.label = name();
        if (peek().kind == Tok::Lt) {
            e.in_card_offset = peek().offset;
            e.in_card = card();
        }
        if (peek().kind == Tok::LBrace) e.props = props();
        expect(Tok::EdgeClose);
        if (peek().kind == Tok::Lt) {
            e.out_card_offset = peek().offset;
            e.out_card = card();
        }
        expect(Tok::LParen);
        e.dst = name();
        expect(Tok::RParen);
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<RawError>& errors_;
};

void check_props(const std::vector<RawProp>& props, std::vector<RawError>& errors) {
    std::set<std::string> seen;
    for (const auto& p : props) {
        if (!seen.insert(p.def.name).second)
            errors.push_back({p.offset, "duplicate property '" + p.def.name + "'", ""});
    }
}

void check_card(const Cardinality& c, std::optional<std::size_t> offset,
                std::vector<RawError>& errors) {
    if (c.max && (*c.max == 0 || c.min > *c.max))
        errors.push_back({offset.value_or(0), "invalid cardinality <" + c.to_string() + ">",
                          "min <= max and max >= 1"});
}

std::vector<PropertyDef> defs(const std::vector<RawProp>& props) {
    std::vector<PropertyDef> out;
    for (const auto& p : props) out.push_back(p.def);
    return out;
}

ParseError to_parse_error(std::string_view text, const RawError& e) {
    std::size_t offset = text.empty() ? 0 : std::min(e.offset, text.size() - 1);
    auto before = text.substr(0, offset);
    auto newline = before.rfind('\n');
    ParseError out;
    out.line = 1 + static_cast<std::size_t>(std::count(before.begin(), before.end(), '\n'));
    out.column = newline == std::string_view::npos ? offset + 1 : offset - newline;
    out.message = e.message;
    out.expected = e.expected;
    return out;
}

void write_props(std::string& out, const std::vector<PropertyDef>& props) {
    auto one = [](const PropertyDef& p) {
        return p.name + ": " + std::string(to_string(p.type)) + (p.required ? "" : "?");
    };
    if (props.empty()) {
        out += "{}";
    } else if (props.size() <= 2) {
        out += "{ ";
        for (std::size_t i = 0; i < props.size(); ++i) {
            if (i) out += ", ";
            out += one(props[i]);
        }
        out += " }";
    } else {
        out += "{\n";
        for (std::size_t i = 0; i < props.size(); ++i) {
            out += "  " + one(props[i]);
            out += i + 1 < props.size() ? ",\n" : "\n";
        }
        out += "}";
    }
}

std::string card_text(const Cardinality& c) {
    return c == Cardinality::unbounded() ? std::string() : "<" + c.to_string() + ">";
}

}  // namespace

std::string ParseError::to_string() const {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!expected.empty()) out += " (expected " + expected + ")";
    return out;
}

ParseResult parse_schema(std::string_view text) {
    std::vector<RawError> errors;
    std::vector<RawNode> raw_nodes;
    std::vector<RawEdge> raw_edges;
    Parser(lex(text, errors), errors).parse(raw_nodes, raw_edges);

    std::vector<NodeType> nodes;
    std::vector<const RawNode*> origin;
    std::map<std::string, std::string> id_of;  // display name -> id
    for (const auto& rn : raw_nodes) {
        NodeType nt;
        nt.id = "n" + std::to_string(nodes.size() + 1);
        nt.labels = rn.name.labels;
        nt.properties = defs(rn.props);
        check_props(rn.props, errors);
        if (!id_of.emplace(nt.display_name(), nt.id).second) {
            errors.push_back({rn.name.offset, "duplicate node type '" + nt.display_name() + "'", ""});
            continue;
        }
        nodes.push_back(std::move(nt));
        origin.push_back(&rn);
    }
    // Supertypes may refer forward.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& super = origin[i]->supertype;
        if (!super) continue;
        auto it = id_of.find(display_name(super->labels));
        if (it == id_of.end()) {
            errors.push_back({super->offset, "unknown supertype '" + super->text + "'", "a declared node type"});
        } else if (it->second == nodes[i].id) {
            errors.push_back({super->offset, "a type cannot be its own supertype", ""});
        } else {
            nodes[i].supertype = it->second;
        }
    }
    auto index_of = [&](const std::string& id) {
        return static_cast<std::size_t>(std::stoul(id.substr(1))) - 1;
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::set<std::size_t> seen{i};
        for (std::size_t cur = i; nodes[cur].supertype; cur = index_of(*nodes[cur].supertype)) {
            if (!seen.insert(index_of(*nodes[cur].supertype)).second) {
                errors.push_back({origin[i]->name.offset,
                                  "supertype cycle through '" + nodes[i].display_name() + "'", ""});
                nodes[i].supertype.reset();
                break;
            }
        }
    }

    std::vector<EdgeType> edges;
    std::set<std::tuple<std::string, std::string, std::string>> edge_keys;
    for (const auto& re : raw_edges) {
        EdgeType et;
        et.id = "e" + std::to_string(edges.size() + 1);
        et.labels = re.label.labels;
        et.properties = defs(re.props);
        et.in_card = re.in_card;
        et.out_card = re.out_card;
        check_props(re.props, errors);
        check_card(re.in_card, re.in_card_offset, errors);
        check_card(re.out_card, re.out_card_offset, errors);
        bool good = true;
        for (auto [raw, slot] : {std::pair{&re.src, &et.src}, std::pair{&re.dst, &et.dst}}) {
            auto it = id_of.find(display_name(raw->labels));
            if (it == id_of.end()) {
                errors.push_back({raw->offset, "unknown node type '" + raw->text + "'", "a declared node type"});
                good = false;
            } else {
                *slot = it->second;
            }
        }
        if (!good) continue;
        if (!edge_keys.emplace(et.label(), et.src, et.dst).second) {
            errors.push_back({re.label.offset, "duplicate edge type '" + et.label() + "'", ""});
            continue;
        }
        edges.push_back(std::move(et));
    }

    ParseResult result;
    if (!errors.empty()) {
        std::stable_sort(errors.begin(), errors.end(),
                         [](const RawError& a, const RawError& b) { return a.offset < b.offset; });
        for (const auto& e : errors) result.errors.push_back(to_parse_error(text, e));
        return result;
    }
    result.schema = SchemaGraph(std::move(nodes), std::move(edges));
    return result;
}

SchemaGraph parse_schema_or_throw(std::string_view text) {
    auto result = parse_schema(text);
    if (result.ok()) return std::move(*result.schema);
    std::string message = "schema text has " + std::to_string(result.errors.size()) + " error(s)";
    for (const auto& e : result.errors) message += "\n  " + e.to_string();
    throw SchemaError(SchemaError::Code::Precondition, message);
}

SerializedSchema serialize_schema(const SchemaGraph& input) {
    auto schema = canonicalize(input);
    SerializedSchema out;
    auto& text = out.text;
    for (const auto& nt : schema.node_types()) {
        std::size_t start = text.size();
        text += "NODE " + nt.display_name();
        if (nt.supertype) text += " : " + schema.node_name(*nt.supertype);
        text += " ";
        write_props(text, nt.properties);
        out.spans.push_back({nt.id, start, text.size()});
        text += "\n";
    }
    if (!schema.node_types().empty() && !schema.edge_types().empty()) text += "\n";
    for (const auto& et : schema.edge_types()) {
        std::size_t start = text.size();
        text += "EDGE (" + schema.node_name(et.src) + ")-[" + et.label() + card_text(et.in_card);
        if (!et.properties.empty()) {
            text += " ";
            write_props(text, et.properties);
        }
        text += "]->" + card_text(et.out_card) + "(" + schema.node_name(et.dst) + ")";
        out.spans.push_back({et.id, start, text.size()});
        text += "\n";
    }
    return out;
}

const SourceSpan& span_of(const std::vector<SourceSpan>& spans, std::string_view element_id) {
    for (const auto& s : spans) {
        if (s.element_id == element_id) return s;
    }
    throw SchemaError(SchemaError::Code::UnknownElement,
                      "no span for element '" + std::string(element_id) + "'");
}

}  // namespace pgschema
