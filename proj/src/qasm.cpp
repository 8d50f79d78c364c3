// SPDX-License-Identifier: MIT

#include "qpredict/qasm.hpp"

#include "qpredict/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace qpredict {

namespace {

enum class Tok { Ident, Number, String, Symbol, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= src_.size()) {
      return tok;
    }
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok.type = Tok::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        tok.text += advance();
      }
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      tok.type = Tok::Number;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.')) {
        tok.text += advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        tok.text += advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
          tok.text += advance();
        }
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          tok.text += advance();
        }
      }
      return tok;
    }
    if (c == '"') {
      tok.type = Tok::String;
      advance();
      while (pos_ < src_.size() && src_[pos_] != '"') {
        tok.text += advance();
      }
      if (pos_ >= src_.size()) {
        throw ParseError(tok.line, tok.column, "unterminated string");
      }
      advance();
      return tok;
    }
    tok.type = Tok::Symbol;
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      tok.text = "->";
      advance();
      advance();
      return tok;
    }
    if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
      tok.text = "==";
      advance();
      advance();
      return tok;
    }
    static constexpr std::string_view kSymbols = ";,[](){}+-*/^";
    if (kSymbols.find(c) == std::string_view::npos) {
      throw ParseError(tok.line, tok.column,
                       std::string("unexpected character '") + c + "'");
    }
    tok.text = std::string(1, advance());
    return tok;
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_.compare(pos_, 2, "//") == 0) {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          advance();
        }
      } else if (src_.compare(pos_, 2, "/*") == 0) {
        while (pos_ < src_.size() && src_.compare(pos_, 2, "*/") != 0) {
          advance();
        }
        if (pos_ < src_.size()) {
          advance();
          advance();
        }
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

struct Register {
  int offset;
  int size;
};

// A gate argument: a whole register (index < 0) or one element.
struct Argument {
  const Register* reg;
  int index;
  Token where;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { bump(); }

  Circuit parse() {
    while (cur_.type != Tok::End) {
      statement();
    }
    Circuit circuit(num_qubits_, num_clbits_);
    for (auto& [inst, where] : pending_) {
      try {
        circuit.append(std::move(inst));
      } catch (const InvalidCircuitError& e) {
        throw ParseError(where.line, where.column, e.what());
      }
    }
    return circuit;
  }

 private:
  void bump() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw ParseError(at.line, at.column, msg);
  }

  bool is_symbol(std::string_view s) const {
    return cur_.type == Tok::Symbol && cur_.text == s;
  }

  void expect_symbol(std::string_view s) {
    if (!is_symbol(s)) {
      fail(cur_, "expected '" + std::string(s) + "', found '" + cur_.text + "'");
    }
    bump();
  }

  std::string expect_ident() {
    if (cur_.type != Tok::Ident) {
      fail(cur_, "expected identifier, found '" + cur_.text + "'");
    }
    std::string s = cur_.text;
    bump();
    return s;
  }

  int expect_int() {
    if (cur_.type != Tok::Number ||
        cur_.text.find_first_not_of("0123456789") != std::string::npos) {
      fail(cur_, "expected non-negative integer, found '" + cur_.text + "'");
    }
    const int v = std::stoi(cur_.text);
    bump();
    return v;
  }

  void statement() {
    const Token start = cur_;
    if (cur_.type != Tok::Ident) {
      fail(cur_, "expected statement, found '" + cur_.text + "'");
    }
    const std::string kw = cur_.text;
    if (kw == "OPENQASM") {
      bump();
      if (cur_.type != Tok::Number) {
        fail(cur_, "expected version number");
      }
      if (cur_.text != "2.0" && cur_.text != "2") {
        throw UnsupportedError("OPENQASM " + cur_.text +
                               " (only OpenQASM 2.0 is supported)");
      }
      bump();
      expect_symbol(";");
    } else if (kw == "include") {
      bump();
      if (cur_.type != Tok::String) {
        fail(cur_, "expected file name string");
      }
      if (cur_.text != "qelib1.inc") {
        throw UnsupportedError("include \"" + cur_.text +
                               "\" (only qelib1.inc is supported)");
      }
      bump();
      expect_symbol(";");
    } else if (kw == "qreg" || kw == "creg") {
      bump();
      declare(kw == "qreg", start);
    } else if (kw == "gate" || kw == "opaque" || kw == "if" || kw == "reset") {
      std::string what = kw == "gate"     ? "user-defined gate body"
                         : kw == "opaque" ? "opaque gate declaration"
                         : kw == "if"     ? "classically controlled 'if'"
                                          : "reset";
      bump();
      if ((kw == "gate" || kw == "opaque") && cur_.type == Tok::Ident) {
        what += " '" + cur_.text + "'";
      }
      throw UnsupportedError(what + " at line " + std::to_string(start.line));
    } else if (kw == "measure") {
      bump();
      measure(start);
    } else if (kw == "barrier") {
      bump();
      barrier(start);
    } else {
      gate_application(start);
    }
  }

  void declare(bool quantum, const Token& start) {
    const std::string name = expect_ident();
    expect_symbol("[");
    const int size = expect_int();
    expect_symbol("]");
    expect_symbol(";");
    if (qregs_.count(name) || cregs_.count(name)) {
      fail(start, "register '" + name + "' redeclared");
    }
    if (quantum) {
      qregs_[name] = Register{num_qubits_, size};
      num_qubits_ += size;
    } else {
      cregs_[name] = Register{num_clbits_, size};
      num_clbits_ += size;
    }
  }

  Argument argument(bool quantum) {
    const Token where = cur_;
    const std::string name = expect_ident();
    auto& regs = quantum ? qregs_ : cregs_;
    auto it = regs.find(name);
    if (it == regs.end()) {
      fail(where, std::string(quantum ? "unknown quantum" : "unknown classical") +
                      " register '" + name + "'");
    }
    int index = -1;
    if (is_symbol("[")) {
      bump();
      const Token at = cur_;
      index = expect_int();
      expect_symbol("]");
      if (index >= it->second.size) {
        fail(at, "index " + std::to_string(index) + " out of range for register " +
                     name + "[" + std::to_string(it->second.size) + "]");
      }
    }
    return Argument{&it->second, index, where};
  }

  std::vector<Argument> argument_list(bool quantum) {
    std::vector<Argument> args{argument(quantum)};
    while (is_symbol(",")) {
      bump();
      args.push_back(argument(quantum));
    }
    return args;
  }

  // Expands register broadcast into one qubit list per application.
  std::vector<std::vector<int>> broadcast(const std::vector<Argument>& args,
                                          const Token& where) const {
    int width = 1;
    bool any_whole = false;
    for (const auto& a : args) {
      if (a.index < 0) {
        if (any_whole && a.reg->size != width) {
          fail(where, "broadcast over registers of different sizes");
        }
        width = a.reg->size;
        any_whole = true;
      }
    }
    std::vector<std::vector<int>> out;
    for (int k = 0; k < (any_whole ? width : 1); ++k) {
      std::vector<int> qubits;
      for (const auto& a : args) {
        qubits.push_back(a.reg->offset + (a.index < 0 ? k : a.index));
      }
      out.push_back(std::move(qubits));
    }
    return out;
  }

  void measure(const Token& start) {
    const Argument q = argument(true);
    expect_symbol("->");
    const Argument c = argument(false);
    expect_symbol(";");
    const bool q_whole = q.index < 0;
    const bool c_whole = c.index < 0;
    if (q_whole != c_whole || (q_whole && q.reg->size != c.reg->size)) {
      fail(start, "measure operands have mismatched shapes");
    }
    const int n = q_whole ? q.reg->size : 1;
    for (int k = 0; k < n; ++k) {
      const int qi = q.reg->offset + (q_whole ? k : q.index);
      const int ci = c.reg->offset + (c_whole ? k : c.index);
      pending_.emplace_back(make_measure(qi, ci), start);
    }
  }

  void barrier(const Token& start) {
    const auto args = argument_list(true);
    expect_symbol(";");
    std::vector<int> qubits;
    for (const auto& a : args) {
      if (a.index < 0) {
        for (int k = 0; k < a.reg->size; ++k) {
          qubits.push_back(a.reg->offset + k);
        }
      } else {
        qubits.push_back(a.reg->offset + a.index);
      }
    }
    pending_.emplace_back(make_barrier(std::move(qubits)), start);
  }

  void gate_application(const Token& start) {
    const std::string name = expect_ident();
    const auto kind = gate_from_name(name);
    if (!kind || is_directive(*kind)) {
      throw UnsupportedError("gate '" + name + "' at line " +
                             std::to_string(start.line) +
                             " is not in the supported standard-header vocabulary");
    }
    std::vector<double> params;
    if (is_symbol("(")) {
      bump();
      if (!is_symbol(")")) {
        params.push_back(expression());
        while (is_symbol(",")) {
          bump();
          params.push_back(expression());
        }
      }
      expect_symbol(")");
    }
    const auto args = argument_list(true);
    expect_symbol(";");
    for (auto& qubits : broadcast(args, start)) {
      pending_.emplace_back(make_gate(*kind, std::move(qubits), params), start);
    }
  }

  // expression := term (('+'|'-') term)*
  double expression() {
    double v = term();
    while (is_symbol("+") || is_symbol("-")) {
      const bool plus = cur_.text == "+";
      bump();
      const double rhs = term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (is_symbol("*") || is_symbol("/")) {
      const bool mul = cur_.text == "*";
      const Token at = cur_;
      bump();
      const double rhs = unary();
      if (!mul && rhs == 0.0) {
        fail(at, "division by zero in constant expression");
      }
      v = mul ? v * rhs : v / rhs;
    }
    return v;
  }

  double unary() {
    if (is_symbol("-")) {
      bump();
      return -unary();
    }
    if (is_symbol("+")) {
      bump();
      return unary();
    }
    return power();
  }

  double power() {
    const double base = primary();
    if (is_symbol("^")) {
      bump();
      return std::pow(base, unary());
    }
    return base;
  }

  double primary() {
    const Token at = cur_;
    if (cur_.type == Tok::Number) {
      const double v = std::strtod(cur_.text.c_str(), nullptr);
      bump();
      return v;
    }
    if (is_symbol("(")) {
      bump();
      const double v = expression();
      expect_symbol(")");
      return v;
    }
    if (cur_.type == Tok::Ident) {
      const std::string id = cur_.text;
      bump();
      if (id == "pi") {
        return std::numbers::pi;
      }
      static const std::unordered_map<std::string, double (*)(double)> kFuncs{
          {"sin", [](double x) { return std::sin(x); }},
          {"cos", [](double x) { return std::cos(x); }},
          {"tan", [](double x) { return std::tan(x); }},
          {"exp", [](double x) { return std::exp(x); }},
          {"ln", [](double x) { return std::log(x); }},
          {"sqrt", [](double x) { return std::sqrt(x); }},
      };
      auto it = kFuncs.find(id);
      if (it == kFuncs.end()) {
        fail(at, "unknown identifier '" + id + "' in expression");
      }
      expect_symbol("(");
      const double arg = expression();
      expect_symbol(")");
      return it->second(arg);
    }
    fail(at, "expected expression, found '" + at.text + "'");
  }

  Lexer lexer_;
  Token cur_;
  std::unordered_map<std::string, Register> qregs_;
  std::unordered_map<std::string, Register> cregs_;
  int num_qubits_ = 0;
  int num_clbits_ = 0;
  std::vector<std::pair<Instruction, Token>> pending_;
};

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Circuit parse_qasm(std::string_view source) { return Parser(source).parse(); }

Circuit load_qasm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  Circuit c = parse_qasm(ss.str());
  c.set_name(path.stem().string());
  return c;
}

std::string to_qasm(const Circuit& circuit) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  if (circuit.num_qubits() > 0) {
    out << "qreg q[" << circuit.num_qubits() << "];\n";
  }
  if (circuit.num_clbits() > 0) {
    out << "creg c[" << circuit.num_clbits() << "];\n";
  }
  for (const auto& op : circuit.ops()) {
    if (op.kind == GateKind::Measure) {
      out << "measure q[" << op.qubits[0] << "] -> c[" << *op.clbit << "];\n";
      continue;
    }
    out << gate_name(op.kind);
    if (!op.params.empty()) {
      out << '(';
      for (std::size_t i = 0; i < op.params.size(); ++i) {
        out << (i ? "," : "") << format_real(op.params[i]);
      }
      out << ')';
    }
    for (std::size_t i = 0; i < op.qubits.size(); ++i) {
      out << (i ? "," : " ") << "q[" << op.qubits[i] << ']';
    }
    out << ";\n";
  }
  return out.str();
}

void save_qasm(const Circuit& circuit, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << to_qasm(circuit);
}

}  // namespace qpredict
