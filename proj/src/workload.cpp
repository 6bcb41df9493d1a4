#include "cgprof/workload.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>

#include "cgprof/error.hpp"

namespace cgprof::workload {
namespace {

enum class Tok { Name, Int, LParen, RParen, LBrace, RBrace, Semi, End };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    std::size_t line = 1;
    std::size_t column = 1;
};

bool is_keyword(std::string_view s) {
    return s == "def" || s == "work" || s == "call" || s == "repeat";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.column = column_;
        if (pos_ >= src_.size()) {
            return t;
        }
        const char c = src_[pos_];
        const std::size_t begin = pos_;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() && is_name_char(src_[pos_])) {
                bump();
            }
            t.kind = Tok::Name;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                bump();
            }
            t.kind = Tok::Int;
        } else {
            switch (c) {
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                case '{': t.kind = Tok::LBrace; break;
                case '}': t.kind = Tok::RBrace; break;
                case ';': t.kind = Tok::Semi; break;
                default:
                    throw ScriptError(ScriptError::Kind::Syntax, line_, column_,
                                      std::string("unexpected character '") + c + "'");
            }
            bump();
        }
        t.text = src_.substr(begin, pos_ - begin);
        return t;
    }

private:
    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    bump();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

const char* describe(Tok k) {
    switch (k) {
        case Tok::Name: return "name";
        case Tok::Int: return "integer";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Semi: return "';'";
        case Tok::End: return "end of input";
    }
    return "token";
}

struct CallSite {
    std::string name;
    std::size_t line;
    std::size_t column;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

    Script parse() {
        Script script;
        std::unordered_map<std::string, bool> defined;
        while (cur_.kind == Tok::Name && cur_.text == "def") {
            advance();
            const Token name = expect(Tok::Name);
            check_name(name);
            if (!defined.emplace(std::string(name.text), true).second) {
                throw ScriptError(ScriptError::Kind::DuplicateDefinition, name.line, name.column,
                                  "function '" + std::string(name.text) + "' is already defined");
            }
            expect(Tok::LParen);
            expect(Tok::RParen);
            expect(Tok::LBrace);
            FuncDef def{std::string(name.text), block()};
            expect(Tok::RBrace);
            script.defs.push_back(std::move(def));
        }
        while (cur_.kind != Tok::End) {
            if (cur_.kind == Tok::Name && cur_.text == "def") {
                throw ScriptError(ScriptError::Kind::Syntax, cur_.line, cur_.column,
                                  "definitions must precede toplevel statements");
            }
            script.body.push_back(statement());
        }
        for (const CallSite& site : calls_) {
            if (!defined.count(site.name)) {
                throw ScriptError(ScriptError::Kind::UndefinedFunction, site.line, site.column,
                                  "call of undefined function '" + site.name + "'");
            }
        }
        return script;
    }

private:
    void advance() { cur_ = lex_.next(); }

    Token expect(Tok kind) {
        if (cur_.kind != kind) {
            throw ScriptError(ScriptError::Kind::Syntax, cur_.line, cur_.column,
                              std::string("expected ") + describe(kind) + ", found " + describe(cur_.kind));
        }
        Token t = cur_;
        advance();
        return t;
    }

    static void check_name(const Token& name) {
        if (is_keyword(name.text)) {
            throw ScriptError(ScriptError::Kind::ReservedName, name.line, name.column,
                              "'" + std::string(name.text) + "' is reserved");
        }
    }

    std::uint64_t integer() {
        const Token t = expect(Tok::Int);
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc{} || value > static_cast<std::uint64_t>(INT64_MAX)) {
            throw ScriptError(ScriptError::Kind::Syntax, t.line, t.column, "integer out of range");
        }
        return value;
    }

    std::vector<Stmt> block() {
        std::vector<Stmt> body;
        while (cur_.kind != Tok::RBrace && cur_.kind != Tok::End) {
            body.push_back(statement());
        }
        return body;
    }

    Stmt statement() {
        const Token head = expect(Tok::Name);
        if (head.text == "work") {
            const auto dt = static_cast<Nanos>(integer());
            expect(Tok::Semi);
            return Stmt{Work{dt}};
        }
        if (head.text == "call") {
            const Token name = expect(Tok::Name);
            check_name(name);
            expect(Tok::Semi);
            calls_.push_back({std::string(name.text), name.line, name.column});
            return Stmt{Call{std::string(name.text)}};
        }
        if (head.text == "repeat") {
            const std::uint64_t n = integer();
            expect(Tok::LBrace);
            Repeat rep{n, block()};
            expect(Tok::RBrace);
            return Stmt{std::move(rep)};
        }
        throw ScriptError(ScriptError::Kind::Syntax, head.line, head.column,
                          "unknown statement '" + std::string(head.text) + "'");
    }

    Lexer lex_;
    Token cur_;
    std::vector<CallSite> calls_;
};

void emit(std::string& out, const std::vector<Stmt>& body, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const Stmt& s : body) {
        if (const auto* w = std::get_if<Work>(&s.node)) {
            out += pad + "work " + std::to_string(w->duration) + ";\n";
        } else if (const auto* c = std::get_if<Call>(&s.node)) {
            out += pad + "call " + c->name + ";\n";
        } else {
            const auto& r = std::get<Repeat>(s.node);
            out += pad + "repeat " + std::to_string(r.count) + " {\n";
            emit(out, r.body, indent + 1);
            out += pad + "}\n";
        }
    }
}

// Statements with call targets resolved to indices.
struct Resolved;
struct ResolvedRepeat {
    std::uint64_t count;
    std::vector<Resolved> body;
};
struct Resolved {
    std::variant<Nanos, std::size_t, ResolvedRepeat> node;
};

class Interpreter {
public:
    Interpreter(const Script& script, TimeSource& source, HookRegistry& registry, const RunOptions& options)
        : source_(source), registry_(registry), options_(options) {
        std::map<std::string, std::size_t, std::less<>> index;
        for (std::size_t i = 0; i < script.defs.size(); ++i) {
            index.emplace(script.defs[i].name, i);
            ids_.push_back(FunctionId{script.defs[i].name, FunctionType::Script});
        }
        for (const FuncDef& def : script.defs) {
            bodies_.push_back(resolve(def.body, index));
        }
        toplevel_ = resolve(script.body, index);
    }

    RunStats run() {
        exec(toplevel_);
        return stats_;
    }

private:
    static std::vector<Resolved> resolve(const std::vector<Stmt>& body,
                                         const std::map<std::string, std::size_t, std::less<>>& index) {
        std::vector<Resolved> out;
        out.reserve(body.size());
        for (const Stmt& s : body) {
            if (const auto* w = std::get_if<Work>(&s.node)) {
                out.push_back(Resolved{w->duration});
            } else if (const auto* c = std::get_if<Call>(&s.node)) {
                auto it = index.find(c->name);
                if (it == index.end()) {
                    throw ScriptError(ScriptError::Kind::UndefinedFunction, 0, 0,
                                      "call of undefined function '" + c->name + "'");
                }
                out.push_back(Resolved{it->second});
            } else {
                const auto& r = std::get<Repeat>(s.node);
                out.push_back(Resolved{ResolvedRepeat{r.count, resolve(r.body, index)}});
            }
        }
        return out;
    }

    void exec(const std::vector<Resolved>& body) {
        for (const Resolved& s : body) {
            switch (s.node.index()) {
                case 0:
                    source_.spend(std::get<0>(s.node));
                    break;
                case 1:
                    invoke(std::get<1>(s.node));
                    break;
                default: {
                    const auto& r = std::get<2>(s.node);
                    for (std::uint64_t i = 0; i < r.count; ++i) {
                        exec(r.body);
                    }
                }
            }
        }
    }

    void invoke(std::size_t fn) {
        if (depth_ >= options_.max_depth) {
            throw WorkloadRuntimeError("call depth limit of " + std::to_string(options_.max_depth) +
                                       " exceeded calling '" + ids_[fn].name + "'");
        }
        ++depth_;
        ++stats_.calls;
        stats_.max_depth = std::max(stats_.max_depth, depth_);
        registry_.send_event(ids_[fn], EventKind::Call);
        exec(bodies_[fn]);
        registry_.send_event(ids_[fn], EventKind::Return);
        --depth_;
    }

    TimeSource& source_;
    HookRegistry& registry_;
    RunOptions options_;
    std::vector<FunctionId> ids_;
    std::vector<std::vector<Resolved>> bodies_;
    std::vector<Resolved> toplevel_;
    std::size_t depth_ = 0;
    RunStats stats_;
};

}  // namespace

Script parse(std::string_view source) { return Parser(source).parse(); }

std::string to_source(const Script& script) {
    std::string out;
    for (const FuncDef& def : script.defs) {
        out += "def " + def.name + "() {\n";
        emit(out, def.body, 1);
        out += "}\n";
    }
    emit(out, script.body, 0);
    return out;
}

RunStats run(const Script& script, TimeSource& source, HookRegistry& registry, const RunOptions& options) {
    return Interpreter(script, source, registry, options).run();
}

Script tight_loop(std::uint64_t ncalls, Nanos work_per_call) {
    Script script;
    FuncDef f{"f", {}};
    if (work_per_call > 0) {
        f.body.push_back(Stmt{Work{work_per_call}});
    }
    script.defs.push_back(std::move(f));
    script.body.push_back(Stmt{Repeat{ncalls, {Stmt{Call{"f"}}}}});
    return script;
}

}  // namespace cgprof::workload
