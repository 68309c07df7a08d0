#include "depguard/error.hpp"
#include "depguard/frontend.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace depguard
{
namespace
{
std::string var_name(VarId v)
{
    return "s" + std::to_string(v);
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    s = trim(s);
    if (s.empty())
        return parts;
    size_t start = 0;
    for (;;)
    {
        const size_t p = s.find(sep, start);
        parts.push_back(trim(s.substr(start, p == std::string_view::npos ? s.npos : p - start)));
        if (p == std::string_view::npos)
            break;
        start = p + 1;
    }
    return parts;
}

[[noreturn]] void fail(size_t line_no, const std::string& what)
{
    throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + what);
}

Pc parse_pc(std::string_view s, size_t line_no)
{
    s = trim(s);
    if (s == "exit")
        return kExitPc;
    Pc v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail(line_no, "bad program counter '" + std::string(s) + "'");
    return v;
}

VarId parse_var(std::string_view s, size_t line_no)
{
    if (s.size() < 2 || s[0] != 's')
        fail(line_no, "bad variable '" + std::string(s) + "'");
    VarId v = 0;
    const auto [p, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail(line_no, "bad variable '" + std::string(s) + "'");
    return v;
}

u256 parse_value(std::string_view s, size_t line_no)
{
    const auto v = u256::parse(s);
    if (!v)
        fail(line_no, "bad value '" + std::string(s) + "'");
    return *v;
}
}  // namespace

std::string format_instruction(const Instruction& ins)
{
    std::ostringstream os;
    os << ins.pc << ": " << op_name(ins.op);
    if (ins.op == Op::ASSIGN || !ins.out_vars.empty() || !ins.in_vars.empty())
    {
        os << "(";
        for (size_t i = 0; i < ins.out_vars.size(); ++i)
            os << (i ? "," : "") << var_name(ins.out_vars[i]);
        os << ";";
        if (ins.op == Op::ASSIGN)
            os << " " << ins.imm.hex();
        for (size_t i = 0; i < ins.in_vars.size(); ++i)
            os << (i ? "," : " ") << var_name(ins.in_vars[i]);
        os << ")";
    }
    os << " -> ";
    if (ins.pc_next == kExitPc)
        os << "exit";
    else
        os << ins.pc_next;
    if (!ins.pre.empty())
    {
        os << " ; pre=[";
        for (size_t i = 0; i < ins.pre.size(); ++i)
            os << (i ? "," : "") << (ins.pre[i] ? ins.pre[i]->hex() : "_");
        os << "]";
    }
    return os.str();
}

std::string print_asm(const Contract& c)
{
    std::string out;
    for (const auto& [pc, ins] : c.code)
    {
        out += format_instruction(ins);
        out += '\n';
    }
    return out;
}

Contract parse_asm(std::string_view text)
{
    Contract c;
    size_t line_no = 0;
    bool first = true;
    for (const auto raw_line : split(text, '\n'))
    {
        ++line_no;
        auto line = trim(raw_line);
        if (line.empty() || line[0] == '#')
            continue;

        Instruction ins;
        const size_t colon = line.find(':');
        if (colon == line.npos)
            fail(line_no, "missing ':'");
        ins.pc = parse_pc(line.substr(0, colon), line_no);

        std::string_view rest = trim(line.substr(colon + 1));
        std::string_view pre_part;
        if (const size_t semi = rest.find(" ;"); semi != rest.npos)
        {
            pre_part = trim(rest.substr(semi + 2));
            rest = trim(rest.substr(0, semi));
        }

        const size_t arrow = rest.find("->");
        if (arrow == rest.npos)
            fail(line_no, "missing '->'");
        ins.pc_next = parse_pc(rest.substr(arrow + 2), line_no);
        std::string_view call = trim(rest.substr(0, arrow));

        std::string_view name = call;
        std::string_view args;
        if (const size_t lp = call.find('('); lp != call.npos)
        {
            if (call.back() != ')')
                fail(line_no, "unbalanced parentheses");
            name = trim(call.substr(0, lp));
            args = call.substr(lp + 1, call.size() - lp - 2);
        }
        const auto op = op_from_name(name);
        if (!op)
            fail(line_no, "unknown opcode '" + std::string(name) + "'");
        ins.op = *op;

        std::string_view outs = args;
        std::string_view ins_part;
        if (const size_t semi = args.find(';'); semi != args.npos)
        {
            outs = args.substr(0, semi);
            ins_part = args.substr(semi + 1);
        }
        for (const auto v : split(outs, ','))
            ins.out_vars.push_back(parse_var(v, line_no));
        for (const auto v : split(ins_part, ','))
        {
            if (ins.op == Op::ASSIGN)
                ins.imm = parse_value(v, line_no);
            else
                ins.in_vars.push_back(parse_var(v, line_no));
        }

        if (!pre_part.empty())
        {
            if (!pre_part.starts_with("pre=[") || pre_part.back() != ']')
                fail(line_no, "malformed pre list");
            const auto body = pre_part.substr(5, pre_part.size() - 6);
            for (const auto v : split(body, ','))
                ins.pre.push_back(v == "_" ? std::nullopt : std::optional<u256>(parse_value(v, line_no)));
        }
        if (ins.pre.size() != ins.in_vars.size())
        {
            if (!ins.pre.empty())
                fail(line_no, "pre list length differs from argument count");
            ins.pre.assign(ins.in_vars.size(), std::nullopt);
        }

        const auto& info = op_info(ins.op);
        if (info.support == OpSupport::Unsupported)
            throw Error(ErrorKind::UnsupportedOpcode, std::string(info.name), ins.pc);
        if (ins.op != Op::ASSIGN && (ins.in_vars.size() != info.pops || ins.out_vars.size() != info.pushes))
            fail(line_no, "arity mismatch for " + std::string(info.name));
        if (ins.op == Op::ASSIGN && ins.out_vars.size() != 1)
            fail(line_no, "ASSIGN needs one output");
        if (is_push(ins.op) || is_dup(ins.op) || is_swap(ins.op) || ins.op == Op::POP || ins.op == Op::PUSH0)
            fail(line_no, "stack opcode in linearized code");
        if ((ins.op == Op::JUMP || ins.op == Op::JUMPI) && !ins.pre[0])
            throw Error(ErrorKind::DynamicJump, "jump destination must be a constant", ins.pc);

        if (first)
        {
            c.entry = ins.pc;
            first = false;
        }
        if (!c.code.emplace(ins.pc, std::move(ins)).second)
            fail(line_no, "duplicate pc");
    }
    if (c.code.empty())
        throw Error(ErrorKind::Parse, "empty assembly");
    std::map<VarId, Pc> defs;
    for (const auto& [pc, ins] : c.code)
    {
        for (const auto v : ins.out_vars)
            if (!defs.emplace(v, pc).second)
                throw Error(ErrorKind::Parse, "variable s" + std::to_string(v) + " defined twice", pc);
        if (ins.op == Op::JUMP && ins.pc_next != ins.jump_target())
            throw Error(ErrorKind::Parse, "JUMP successor differs from its destination", pc);
    }
    for (const auto& [pc, ins] : c.code)
        for (const auto v : ins.in_vars)
            if (!defs.contains(v))
                throw Error(ErrorKind::Parse, "variable s" + std::to_string(v) + " is never defined", pc);
    for (const auto& [pc, ins] : c.code)
    {
        for (const auto s : c.successors(pc))
            if (!c.code.contains(s))
                throw Error(ErrorKind::Parse, "successor " + std::to_string(s) + " is not an instruction", pc);
    }
    return c;
}
}  // namespace depguard
