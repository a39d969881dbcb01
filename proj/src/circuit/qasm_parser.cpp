#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <unordered_map>

#include "qtime/errors.hpp"
#include "qtime/qasm.hpp"

namespace qtime {
namespace {

enum class Tok { Ident, Number, String, Symbol, Arrow, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        skip_ws_and_comments();
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= src_.size()) {
            current_.kind = Tok::End;
            current_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                bump();
            }
            current_.kind = Tok::Ident;
            current_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
                bump();
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                bump();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) bump();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    bump();
                }
            }
            std::string text = src_.substr(start, pos_ - start);
            double v = 0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc() || res.ptr != text.data() + text.size())
                throw ParseError("malformed number '" + text + "'", current_.line, current_.col);
            current_.kind = Tok::Number;
            current_.text = std::move(text);
            current_.number = v;
            return;
        }
        if (c == '"') {
            bump();
            size_t start = pos_;
            while (pos_ < src_.size() && src_[pos_] != '"') bump();
            if (pos_ >= src_.size())
                throw ParseError("unterminated string", current_.line, current_.col);
            current_.kind = Tok::String;
            current_.text = src_.substr(start, pos_ - start);
            bump();  // closing quote
            return;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            bump();
            bump();
            current_.kind = Tok::Arrow;
            current_.text = "->";
            return;
        }
        static const std::string symbols = "()[]{},;+-*/=<>";
        if (symbols.find(c) != std::string::npos) {
            current_.kind = Tok::Symbol;
            current_.text = std::string(1, c);
            bump();
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    void skip_ws_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

struct Register {
    int offset = 0;
    int size = 0;
};

// One operand reference: a whole register or one element of it.
struct Argument {
    std::string reg;
    int index = -1;  // -1 means whole register
    int line = 1;
    int col = 1;
};

class Parser {
  public:
    Parser(const std::string& text, const GateRegistry& registry, std::string name)
        : lex_(text), registry_(registry) {
        circuit_.name = std::move(name);
    }

    Circuit run() {
        parse_version_header();
        while (lex_.peek().kind != Tok::End) parse_statement();
        return std::move(circuit_);
    }

  private:
    [[noreturn]] void fail(const std::string& msg, const Token& at) {
        throw ParseError(msg, at.line, at.col);
    }

    Token expect_symbol(const std::string& s) {
        Token t = lex_.take();
        if (t.kind != Tok::Symbol || t.text != s) fail("expected '" + s + "'", t);
        return t;
    }

    Token expect_ident() {
        Token t = lex_.take();
        if (t.kind != Tok::Ident) fail("expected identifier", t);
        return t;
    }

    int expect_uint() {
        Token t = lex_.take();
        if (t.kind != Tok::Number || t.number != std::floor(t.number) || t.number < 0)
            fail("expected nonnegative integer", t);
        return static_cast<int>(t.number);
    }

    void parse_version_header() {
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "OPENQASM") {
            lex_.take();
            Token v = lex_.take();
            if (v.kind != Tok::Number) fail("expected version number", v);
            expect_symbol(";");
        }
    }

    void parse_statement() {
        Token head = lex_.take();
        if (head.kind != Tok::Ident) fail("expected statement", head);

        if (head.text == "include") {
            Token file = lex_.take();
            if (file.kind != Tok::String) fail("expected include path string", file);
            expect_symbol(";");
            return;
        }
        if (head.text == "qreg" || head.text == "creg") {
            Token name = expect_ident();
            expect_symbol("[");
            int size = expect_uint();
            expect_symbol("]");
            expect_symbol(";");
            auto& table = head.text == "qreg" ? qregs_ : cregs_;
            int& total = head.text == "qreg" ? circuit_.num_qubits : circuit_.num_clbits;
            if (table.count(name.text)) fail("duplicate register '" + name.text + "'", name);
            table[name.text] = Register{total, size};
            total += size;
            return;
        }
        if (head.text == "barrier") {
            // Operand list is validated for shape only, then dropped.
            parse_argument();
            while (lex_.peek().kind == Tok::Symbol && lex_.peek().text == ",") {
                lex_.take();
                parse_argument();
            }
            expect_symbol(";");
            return;
        }
        if (head.text == "measure") {
            Argument src = parse_argument();
            Token arrow = lex_.take();
            if (arrow.kind != Tok::Arrow) fail("expected '->'", arrow);
            Argument dst = parse_argument();
            expect_symbol(";");
            emit_measure(src, dst);
            return;
        }
        if (head.text == "gate" || head.text == "opaque" || head.text == "if" ||
            head.text == "reset") {
            fail("'" + head.text + "' is outside the supported OpenQASM 2.0 subset", head);
        }
        parse_gate_application(head);
    }

    Argument parse_argument() {
        Token name = expect_ident();
        Argument arg;
        arg.reg = name.text;
        arg.line = name.line;
        arg.col = name.col;
        if (lex_.peek().kind == Tok::Symbol && lex_.peek().text == "[") {
            lex_.take();
            arg.index = expect_uint();
            expect_symbol("]");
        }
        return arg;
    }

    // --- parameter expressions: + - * / , unary minus, parens, pi ---

    double parse_expr() { return parse_additive(); }

    double parse_additive() {
        double v = parse_multiplicative();
        while (lex_.peek().kind == Tok::Symbol &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            std::string op = lex_.take().text;
            double rhs = parse_multiplicative();
            v = op == "+" ? v + rhs : v - rhs;
        }
        return v;
    }

    double parse_multiplicative() {
        double v = parse_unary();
        while (lex_.peek().kind == Tok::Symbol &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            Token op = lex_.take();
            double rhs = parse_unary();
            if (op.text == "/") {
                if (rhs == 0) fail("division by zero in parameter", op);
                v /= rhs;
            } else {
                v *= rhs;
            }
        }
        return v;
    }

    double parse_unary() {
        Token t = lex_.peek();
        if (t.kind == Tok::Symbol && t.text == "-") {
            lex_.take();
            return -parse_unary();
        }
        if (t.kind == Tok::Symbol && t.text == "+") {
            lex_.take();
            return parse_unary();
        }
        if (t.kind == Tok::Symbol && t.text == "(") {
            lex_.take();
            double v = parse_expr();
            expect_symbol(")");
            return v;
        }
        if (t.kind == Tok::Number) return lex_.take().number;
        if (t.kind == Tok::Ident && t.text == "pi") {
            lex_.take();
            return 3.141592653589793238462643383279502884;
        }
        fail("expected parameter expression", t);
    }

    void parse_gate_application(const Token& head) {
        auto kind = registry_.find(head.text);
        if (!kind) fail("unknown gate '" + head.text + "'", head);
        const GateKind& gate = registry_.at(*kind);

        std::vector<double> params;
        if (lex_.peek().kind == Tok::Symbol && lex_.peek().text == "(") {
            lex_.take();
            if (!(lex_.peek().kind == Tok::Symbol && lex_.peek().text == ")")) {
                params.push_back(parse_expr());
                while (lex_.peek().kind == Tok::Symbol && lex_.peek().text == ",") {
                    lex_.take();
                    params.push_back(parse_expr());
                }
            }
            expect_symbol(")");
        }
        if (static_cast<int>(params.size()) != gate.param_count)
            fail("gate '" + gate.name + "' expects " + std::to_string(gate.param_count) +
                     " parameter(s), got " + std::to_string(params.size()),
                 head);

        std::vector<Argument> args;
        args.push_back(parse_argument());
        while (lex_.peek().kind == Tok::Symbol && lex_.peek().text == ",") {
            lex_.take();
            args.push_back(parse_argument());
        }
        expect_symbol(";");
        if (static_cast<int>(args.size()) != gate.arity)
            fail("gate '" + gate.name + "' expects " + std::to_string(gate.arity) +
                     " operand(s), got " + std::to_string(args.size()),
                 head);

        emit_gate(*kind, gate, params, args, head);
    }

    const Register& qreg_of(const Argument& arg) {
        auto it = qregs_.find(arg.reg);
        if (it == qregs_.end())
            throw ParseError("unknown quantum register '" + arg.reg + "'", arg.line, arg.col);
        if (arg.index >= it->second.size)
            throw ParseError("qubit index " + std::to_string(arg.index) + " out of range for '" +
                                 arg.reg + "[" + std::to_string(it->second.size) + "]'",
                             arg.line, arg.col);
        return it->second;
    }

    const Register& creg_of(const Argument& arg) {
        auto it = cregs_.find(arg.reg);
        if (it == cregs_.end())
            throw ParseError("unknown classical register '" + arg.reg + "'", arg.line, arg.col);
        if (arg.index >= it->second.size)
            throw ParseError("bit index " + std::to_string(arg.index) + " out of range for '" +
                                 arg.reg + "[" + std::to_string(it->second.size) + "]'",
                             arg.line, arg.col);
        return it->second;
    }

    void emit_gate(GateKindId kind, const GateKind& gate, const std::vector<double>& params,
                   const std::vector<Argument>& args, const Token& head) {
        // Register operands broadcast per OpenQASM 2.0: all register operands
        // must have equal size, single-qubit operands are repeated.
        int span = 1;
        for (const Argument& a : args) {
            const Register& r = qreg_of(a);
            if (a.index < 0) {
                if (span != 1 && span != r.size)
                    fail("mismatched register sizes in broadcast", head);
                span = r.size;
            }
        }
        for (int rep = 0; rep < span; ++rep) {
            GateOp op;
            op.kind = kind;
            op.arity = gate.arity;
            op.params = params;
            for (size_t s = 0; s < args.size(); ++s) {
                const Register& r = qreg_of(args[s]);
                int local = args[s].index >= 0 ? args[s].index : rep;
                op.qubits[s] = r.offset + local;
            }
            if (op.arity == 2 && op.qubits[0] == op.qubits[1])
                fail("two-qubit gate applied to one qubit twice", head);
            circuit_.ops.push_back(std::move(op));
        }
    }

    void emit_measure(const Argument& src, const Argument& dst) {
        const Register& q = qreg_of(src);
        const Register& c = creg_of(dst);
        if ((src.index < 0) != (dst.index < 0))
            throw ParseError("measure must map qubit to bit or register to register", src.line,
                             src.col);
        if (src.index < 0) {
            if (q.size != c.size)
                throw ParseError("measured register sizes differ", src.line, src.col);
            for (int i = 0; i < q.size; ++i) push_measure(q.offset + i, c.offset + i);
        } else {
            push_measure(q.offset + src.index, c.offset + dst.index);
        }
    }

    void push_measure(int qubit, int clbit) {
        GateOp op;
        op.kind = GateOp::kMeasure;
        op.arity = 1;
        op.qubits[0] = qubit;
        op.clbit = clbit;
        circuit_.ops.push_back(op);
    }

    Lexer lex_;
    const GateRegistry& registry_;
    Circuit circuit_;
    std::unordered_map<std::string, Register> qregs_;
    std::unordered_map<std::string, Register> cregs_;
};

}  // namespace

Circuit parse_qasm(const std::string& text, const GateRegistry& registry, const std::string& name) {
    Parser parser(text, registry, name);
    Circuit c = parser.run();
    c.validate(registry);
    return c;
}

}  // namespace qtime
