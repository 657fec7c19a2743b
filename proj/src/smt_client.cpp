#include "bltab/smt_client.hpp"

#include <csignal>
#include <cstring>
#include <chrono>
#include <fcntl.h>
#include <poll.h>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace bltab {

namespace {

// ---------------------------------------------------------------------------
// Subprocess plumbing
// ---------------------------------------------------------------------------

std::vector<std::string> split_command(const std::string& command) {
    std::vector<std::string> out;
    std::istringstream in(command);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct RunOutput {
    bool launched = false;
    bool timed_out = false;
    int exit_code = -1;
    std::string out, err, fail;
};

RunOutput run_process(const std::vector<std::string>& argv, const std::string& input,
                      int timeout_ms) {
    RunOutput r;
    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (pipe(in_pipe) || pipe(out_pipe) || pipe(err_pipe)) {
        r.fail = "pipe creation failed";
        return r;
    }
    pid_t pid = fork();
    if (pid < 0) {
        r.fail = "fork failed";
        return r;
    }
    if (pid == 0) {
        dup2(in_pipe[0], 0);
        dup2(out_pipe[1], 1);
        dup2(err_pipe[1], 2);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]})
            close(fd);
        std::vector<char*> cargv;
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);
    // The child must never kill us with SIGPIPE if it exits early.
    signal(SIGPIPE, SIG_IGN);
    fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);

    r.launched = true;
    std::size_t written = 0;
    bool in_open = true, out_open = true, err_open = true;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    char buf[4096];
    while (out_open || err_open || in_open) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                        deadline - std::chrono::steady_clock::now())
                        .count();
        if (left <= 0) {
            r.timed_out = true;
            break;
        }
        std::vector<pollfd> fds;
        if (in_open) fds.push_back({in_pipe[1], POLLOUT, 0});
        if (out_open) fds.push_back({out_pipe[0], POLLIN, 0});
        if (err_open) fds.push_back({err_pipe[0], POLLIN, 0});
        int n = poll(fds.data(), fds.size(), static_cast<int>(std::min<long long>(left, 200)));
        if (n < 0 && errno != EINTR) break;
        for (const pollfd& f : fds) {
            if (!f.revents) continue;
            if (f.fd == in_pipe[1]) {
                if (f.revents & POLLERR) {
                    close(in_pipe[1]);
                    in_open = false;
                    continue;
                }
                ssize_t w = write(in_pipe[1], input.data() + written,
                                  std::min<std::size_t>(input.size() - written, 4096));
                if (w > 0) written += static_cast<std::size_t>(w);
                if (w < 0 && errno != EAGAIN && errno != EINTR) {
                    close(in_pipe[1]);
                    in_open = false;
                    continue;
                }
                if (written == input.size()) {
                    close(in_pipe[1]);
                    in_open = false;
                }
            } else {
                std::string& sink = f.fd == out_pipe[0] ? r.out : r.err;
                bool& open_flag = f.fd == out_pipe[0] ? out_open : err_open;
                ssize_t got = read(f.fd, buf, sizeof buf);
                if (got > 0) {
                    sink.append(buf, static_cast<std::size_t>(got));
                } else if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR)) {
                    close(f.fd);
                    open_flag = false;
                }
            }
        }
    }
    if (in_open) close(in_pipe[1]);
    if (out_open) close(out_pipe[0]);
    if (err_open) close(err_pipe[0]);
    if (r.timed_out) kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

// ---------------------------------------------------------------------------
// S-expression reader
// ---------------------------------------------------------------------------

struct Sx {
    bool atom = true;
    std::string text;
    std::vector<Sx> kids;
};

std::vector<Sx> read_sexprs(const std::string& text) {
    std::vector<Sx> top;
    std::vector<Sx*> stack;
    std::size_t i = 0, n = text.size();
    auto push = [&](Sx s) -> Sx* {
        std::vector<Sx>& into = stack.empty() ? top : stack.back()->kids;
        into.push_back(std::move(s));
        return &into.back();
    };
    while (i < n) {
        char c = text[i];
        if (c == ';') {  // comment to end of line
            while (i < n && text[i] != '\n') ++i;
        } else if (c == '(') {
            Sx* node = push(Sx{false, "", {}});
            stack.push_back(node);
            ++i;
        } else if (c == ')') {
            if (!stack.empty()) stack.pop_back();
            ++i;
        } else if (c == '"') {  // string literal, kept verbatim
            std::size_t j = i + 1;
            while (j < n && text[j] != '"') ++j;
            push(Sx{true, text.substr(i + 1, j - i - 1), {}});
            i = j < n ? j + 1 : n;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else {
            std::size_t j = i;
            while (j < n && !std::isspace(static_cast<unsigned char>(text[j])) &&
                   text[j] != '(' && text[j] != ')' && text[j] != ';')
                ++j;
            push(Sx{true, text.substr(i, j - i), {}});
            i = j;
        }
    }
    return top;
}

// ---------------------------------------------------------------------------
// Polynomials over Rat (for algebraic root objects)
// ---------------------------------------------------------------------------

using Poly = std::vector<Rat>;  // coefficient of x^i at index i

void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    poly_trim(r);
    return r;
}

Poly poly_neg(Poly a) {
    for (auto& c : a) c = -c;
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

Poly poly_deriv(const Poly& p) {
    Poly r;
    for (std::size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * Rat(static_cast<long>(i)));
    return r;
}

Poly poly_rem(Poly a, const Poly& b) {
    poly_trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rat f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        poly_trim(a);
    }
    return a;
}

Rat poly_eval(const Poly& p, const Rat& x) {
    Rat r = 0;
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

// Sign variations of the Sturm chain at x; zeros are skipped as usual.
int sturm_variations(const std::vector<Poly>& chain, const Rat& x) {
    int v = 0, prev = 0;
    for (const Poly& p : chain) {
        int s = sgn(poly_eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

// k-th real root (1-based, ascending) of p, bisected to the given width.
// Returns false if p has fewer than k real roots.
bool kth_real_root(const Poly& p, long k, const Rat& width, Rat& out_mid, Rat& out_rad) {
    if (p.size() < 2 || k < 1) return false;
    std::vector<Poly> chain{p, poly_deriv(p)};
    while (!chain.back().empty()) {
        Poly r = poly_neg(poly_rem(chain[chain.size() - 2], chain.back()));
        poly_trim(r);
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    Rat bound = 1;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        Rat m = abs(p[i] / p.back());
        if (m > bound) bound = m;
    }
    bound += 1;
    Rat lo = -bound, hi = bound;
    int v_lo = sturm_variations(chain, lo);
    if (v_lo - sturm_variations(chain, hi) < k) return false;
    // Invariant: the k-th root lies in (lo, hi].
    while (hi - lo > width) {
        Rat mid = (lo + hi) / 2;
        if (poly_eval(p, mid) == 0) mid += (hi - lo) / 1000;  // step off an exact root
        if (v_lo - sturm_variations(chain, mid) >= k)
            hi = mid;
        else
            lo = mid;
    }
    out_mid = (lo + hi) / 2;
    out_rad = (hi - lo) / 2;
    return true;
}

// ---------------------------------------------------------------------------
// Value parsing
// ---------------------------------------------------------------------------

bool parse_numeral(const std::string& s, Rat& out) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
    out = Rat(s);
    out.canonicalize();
    return true;
}

// Decimal, optionally with z3's trailing '?' marking a truncated value.
bool parse_decimal(const std::string& s, SmtValue& out) {
    std::string t = s;
    bool approx = false;
    if (!t.empty() && t.back() == '?') {
        approx = true;
        t.pop_back();
    }
    std::size_t dot = t.find('.');
    if (dot == std::string::npos) return false;
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg) ip = ip.substr(1);
    if (ip.empty() && fp.empty()) return false;
    for (char c : ip + fp)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    Rat v = ip.empty() ? Rat(0) : Rat(ip);
    Rat scale = 1;
    for (char c : fp) {
        scale /= 10;
        v += Rat(std::string(1, c)) * scale;
    }
    if (neg) v = -v;
    out.value = v;
    out.exact = !approx;
    if (approx) out.precision = scale;  // one unit in the last printed place
    return true;
}

// Polynomial in one unknown from a solver-printed s-expression.
bool parse_poly(const Sx& s, Poly& out) {
    if (s.atom) {
        Rat q;
        if (parse_numeral(s.text, q)) {
            out = q == 0 ? Poly{} : Poly{q};
            return true;
        }
        out = Poly{Rat(0), Rat(1)};  // any symbol is the unknown
        return true;
    }
    if (s.kids.empty() || !s.kids[0].atom) return false;
    const std::string& op = s.kids[0].text;
    std::vector<Poly> args;
    for (std::size_t i = 1; i < s.kids.size(); ++i) {
        Poly p;
        if (!parse_poly(s.kids[i], p)) return false;
        args.push_back(std::move(p));
    }
    if (args.empty()) return false;
    if (op == "+") {
        out = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) out = poly_add(out, args[i]);
        return true;
    }
    if (op == "-") {
        if (args.size() == 1) {
            out = poly_neg(args[0]);
            return true;
        }
        out = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) out = poly_add(out, poly_neg(args[i]));
        return true;
    }
    if (op == "*") {
        out = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) out = poly_mul(out, args[i]);
        return true;
    }
    if (op == "^" && args.size() == 2 && s.kids[2].atom) {
        Rat e;
        if (!parse_numeral(s.kids[2].text, e) || e < 0 || e.get_den() != 1) return false;
        long n = static_cast<long>(e.get_num().get_si());
        out = Poly{Rat(1)};
        for (long i = 0; i < n; ++i) out = poly_mul(out, args[0]);
        return true;
    }
    if (op == "/" && args.size() == 2 && args[1].size() == 1) {
        out = args[0];
        for (auto& c : out) c /= args[1][0];
        return true;
    }
    return false;
}

bool parse_value(const Sx& s, SmtValue& out) {
    if (s.atom) {
        Rat q;
        if (parse_numeral(s.text, q)) {
            out = {q, true, 0};
            return true;
        }
        return parse_decimal(s.text, out);
    }
    if (s.kids.empty() || !s.kids[0].atom) return false;
    const std::string& op = s.kids[0].text;
    if (op == "-" && s.kids.size() == 2) {
        SmtValue inner;
        if (!parse_value(s.kids[1], inner)) return false;
        out = {-inner.value, inner.exact, inner.precision};
        return true;
    }
    if (op == "/" && s.kids.size() == 3) {
        SmtValue a, b;
        if (!parse_value(s.kids[1], a) || !parse_value(s.kids[2], b) || b.value == 0) return false;
        out.value = a.value / b.value;
        out.exact = a.exact && b.exact;
        out.precision = a.precision > b.precision ? a.precision : b.precision;
        return true;
    }
    if (op == "root-obj" && s.kids.size() == 3 && s.kids[2].atom) {
        Poly p;
        Rat k;
        if (!parse_poly(s.kids[1], p) || !parse_numeral(s.kids[2].text, k) || k.get_den() != 1)
            return false;
        Rat mid, rad;
        Rat width(1, 1000000000000L);  // 1e-12
        if (!kth_real_root(p, k.get_num().get_si(), width, mid, rad)) return false;
        out = {mid, false, rad};
        return true;
    }
    return false;
}

}  // namespace

SmtResult run_smt(const std::string& problem, const std::string& command, int timeout_ms) {
    SmtResult res;
    std::vector<std::string> argv = split_command(command);
    if (argv.empty()) {
        res.status = SmtStatus::Error;
        res.diagnostics = "empty solver command";
        return res;
    }
    RunOutput run = run_process(argv, problem, timeout_ms);
    if (!run.launched) {
        res.status = SmtStatus::Error;
        res.diagnostics = run.fail;
        return res;
    }
    if (run.timed_out) {
        res.status = SmtStatus::Unknown;
        res.diagnostics = "external solver timeout after " + std::to_string(timeout_ms) + " ms";
        return res;
    }

    std::vector<Sx> top = read_sexprs(run.out);
    bool verdict_seen = false;
    for (const Sx& s : top) {
        if (!s.atom) continue;
        if (s.text == "sat") {
            res.status = SmtStatus::Sat;
            verdict_seen = true;
            break;
        }
        if (s.text == "unsat") {
            res.status = SmtStatus::Unsat;
            verdict_seen = true;
            break;
        }
        if (s.text == "unknown") {
            res.status = SmtStatus::Unknown;
            verdict_seen = true;
            break;
        }
    }
    if (!verdict_seen) {
        res.status = SmtStatus::Error;
        if (run.exit_code == 127) {
            res.diagnostics = "failed to launch external solver: " + argv[0];
        } else {
            std::string note = !run.err.empty() ? run.err : run.out;
            if (note.size() > 500) note.resize(500);
            res.diagnostics = "no verdict from external solver" +
                              (note.empty() ? std::string() : ": " + note);
        }
        return res;
    }
    if (res.status != SmtStatus::Sat) return res;

    // The first top-level list of (name value) pairs is the model answer.
    for (const Sx& s : top) {
        if (s.atom || s.kids.empty()) continue;
        bool shaped = true;
        for (const Sx& kid : s.kids)
            if (kid.atom || kid.kids.size() != 2 || !kid.kids[0].atom) {
                shaped = false;
                break;
            }
        if (!shaped) continue;
        for (const Sx& kid : s.kids) {
            SmtValue v;
            if (parse_value(kid.kids[1], v))
                res.values[kid.kids[0].text] = v;
            else if (res.diagnostics.empty())
                res.diagnostics = "unparsed model value for " + kid.kids[0].text;
        }
        break;
    }
    return res;
}

}  // namespace bltab
