# cython: language_level=3
"""C++ kernels for the three simulators.

Same loop semantics as the pure-Python engines (rejection.py, indexed.py,
naive.py), rebuilt on flat C++ containers with a local xoshiro256**
generator. The RNG streams differ from the pure engines by construction;
equivalence is distributional, which is what the test suite checks.

Each kernel owns a private copy of the dynamical state and returns the
event log, loop statistics and the final configuration as arrays; the
Python wrapper (compiled.py) moves those back into a SimState.
"""

from libc.math cimport INFINITY, log
from libc.stdint cimport int8_t, int32_t, int64_t, uint8_t, uint64_t
from libc.string cimport memcpy
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

import numpy as np

cdef extern from *:
    """
    #include <stdint.h>
    #include <time.h>

    typedef struct { uint64_t s[4]; } cvs_rng;

    static inline uint64_t cvs_rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static inline uint64_t cvs_splitmix(uint64_t *x) {
        uint64_t z = (*x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static inline void cvs_seed(cvs_rng *r, uint64_t seed) {
        uint64_t x = seed;
        for (int i = 0; i < 4; i++) r->s[i] = cvs_splitmix(&x);
    }

    /* xoshiro256** (Blackman & Vigna), public domain reference scheme */
    static inline uint64_t cvs_next(cvs_rng *r) {
        uint64_t *s = r->s;
        const uint64_t out = cvs_rotl(s[1] * 5, 7) * 9;
        const uint64_t t = s[1] << 17;
        s[2] ^= s[0]; s[3] ^= s[1]; s[1] ^= s[2]; s[0] ^= s[3];
        s[2] ^= t;
        s[3] = cvs_rotl(s[3], 45);
        return out;
    }

    /* 53-bit uniform on (0, 1]; safe as a log() argument */
    static inline double cvs_u01(cvs_rng *r) {
        return ((cvs_next(r) >> 11) + 1) * (1.0 / 9007199254740992.0);
    }

    /* 53-bit uniform on [0, 1) */
    static inline double cvs_u01co(cvs_rng *r) {
        return (cvs_next(r) >> 11) * (1.0 / 9007199254740992.0);
    }

    /* unbiased integer on [0, bound); multiply-shift with rejection */
    static inline uint64_t cvs_below(cvs_rng *r, uint64_t bound) {
        uint64_t x = cvs_next(r);
        __uint128_t m = (__uint128_t)x * (__uint128_t)bound;
        uint64_t lo = (uint64_t)m;
        if (lo < bound) {
            uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                x = cvs_next(r);
                m = (__uint128_t)x * (__uint128_t)bound;
                lo = (uint64_t)m;
            }
        }
        return (uint64_t)(m >> 64);
    }

    static inline int64_t cvs_cpu_ns(void) {
        struct timespec ts;
        clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
        return (int64_t)ts.tv_sec * 1000000000LL + ts.tv_nsec;
    }
    """
    ctypedef struct cvs_rng:
        uint64_t s[4]
    void cvs_seed(cvs_rng *r, uint64_t seed) nogil
    uint64_t cvs_next(cvs_rng *r) nogil
    double cvs_u01(cvs_rng *r) nogil
    double cvs_u01co(cvs_rng *r) nogil
    uint64_t cvs_below(cvs_rng *r, uint64_t bound) nogil
    int64_t cvs_cpu_ns() nogil

# Event kind codes; compiled.py asserts these match events.py at import.
RECOVERY = 0
TRANSMISSION = 1
DISCONNECT = 2
CONNECT = 3
NO_NODE = -1

cdef int8_t K_REC = 0, K_TRANS = 1, K_DISC = 2, K_CONN = 3
cdef int32_t C_NO_NODE = -1

cdef int64_t ICON_TIMEOUT_MASK = 4095   # check every 4096 loop iterations
cdef int64_t FAST_TIMEOUT_MASK = 255    # check every 256 accepted events


cdef inline uint64_t ekey(int64_t u, int64_t v, int64_t n) noexcept nogil:
    """Hash key of the canonical edge (u, v), u < v."""
    return <uint64_t>u * <uint64_t>n + <uint64_t>v


cdef inline int64_t tri(int64_t u, int64_t v, int64_t n) noexcept nogil:
    """Rank of pair (u, v), u < v, in row-major upper-triangle order."""
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


cdef inline void elist_insert(vector[int32_t]& la, vector[int32_t]& lb,
                              unordered_map[uint64_t, int32_t]& pos,
                              int32_t u, int32_t v, int64_t n) noexcept nogil:
    pos[ekey(u, v, n)] = <int32_t>la.size()
    la.push_back(u)
    lb.push_back(v)


cdef inline void elist_remove(vector[int32_t]& la, vector[int32_t]& lb,
                              unordered_map[uint64_t, int32_t]& pos,
                              int32_t u, int32_t v, int64_t n) noexcept nogil:
    """Swap-with-last removal; the edge must be present."""
    cdef uint64_t k = ekey(u, v, n)
    cdef int32_t p = pos[k]
    cdef int32_t last = <int32_t>la.size() - 1
    cdef int32_t mu, mv
    if p != last:
        mu = la[last]
        mv = lb[last]
        la[p] = mu
        lb[p] = mv
        pos[ekey(mu, mv, n)] = p
    la.pop_back()
    lb.pop_back()
    pos.erase(k)


cdef inline void pair_insert(vector[int32_t]& pa, vector[int32_t]& pb,
                             vector[int32_t]& pos,
                             int32_t u, int32_t v, int64_t n) noexcept nogil:
    pos[tri(u, v, n)] = <int32_t>pa.size()
    pa.push_back(u)
    pb.push_back(v)


cdef inline void pair_remove(vector[int32_t]& pa, vector[int32_t]& pb,
                             vector[int32_t]& pos,
                             int32_t u, int32_t v, int64_t n) noexcept nogil:
    cdef int64_t k = tri(u, v, n)
    cdef int32_t p = pos[k]
    cdef int32_t last = <int32_t>pa.size() - 1
    cdef int32_t mu, mv
    if p != last:
        mu = pa[last]
        mv = pb[last]
        pa[p] = mu
        pb[p] = mv
        pos[tri(mu, mv, n)] = p
    pa.pop_back()
    pb.pop_back()
    pos[k] = -1


cdef inline void nbr_remove(vector[vector[int32_t]]& nbr,
                            int32_t u, int32_t v) noexcept nogil:
    """Drop v from u's neighbor list (linear scan, degrees are small)."""
    cdef size_t i
    for i in range(nbr[u].size()):
        if nbr[u][i] == v:
            nbr[u][i] = nbr[u].back()
            nbr[u].pop_back()
            return


cdef _pack(vector[double]& ev_t, vector[int8_t]& ev_k,
           vector[int32_t]& ev_a, vector[int32_t]& ev_b,
           int64_t accepted, int64_t rejected, int64_t wall_ns,
           bint timed_out, vector[int8_t]& st,
           vector[int32_t]& ea, vector[int32_t]& eb, double t_final):
    """Copy kernel results into numpy arrays for the wrapper."""
    cdef size_t nev = ev_t.size(), m = ea.size(), n = st.size()
    times = np.empty(nev, dtype=np.float64)
    kinds = np.empty(nev, dtype=np.int8)
    node_a = np.empty(nev, dtype=np.int32)
    node_b = np.empty(nev, dtype=np.int32)
    cdef double[::1] tv = times
    cdef int8_t[::1] kv = kinds
    cdef int32_t[::1] av = node_a
    cdef int32_t[::1] bv = node_b
    if nev:
        memcpy(&tv[0], ev_t.data(), nev * sizeof(double))
        memcpy(&kv[0], ev_k.data(), nev * sizeof(int8_t))
        memcpy(&av[0], ev_a.data(), nev * sizeof(int32_t))
        memcpy(&bv[0], ev_b.data(), nev * sizeof(int32_t))
    states = np.empty(n, dtype=np.int8)
    cdef int8_t[::1] sv = states
    if n:
        memcpy(&sv[0], st.data(), n * sizeof(int8_t))
    edges = np.empty((m, 2), dtype=np.int32)
    cdef int32_t[:, ::1] emv = edges
    cdef size_t i
    for i in range(m):
        emv[i, 0] = ea[i]
        emv[i, 1] = eb[i]
    return (times, kinds, node_a, node_b, accepted, rejected, wall_ns,
            bool(timed_out), states, edges, t_final)


def icon_run(const int8_t[::1] states0, const int32_t[:, ::1] edges0,
             double alpha, double beta, double a, double b,
             double t0, double horizon, uint64_t seed,
             int64_t max_steps, double timeout_s,
             bint early_exit, bint record):
    """Rejection sampler loop; see rejection.py for the semantics."""
    cdef int64_t n = states0.shape[0]
    cdef int64_t complete = n * (n - 1) // 2
    cdef cvs_rng rng
    cvs_seed(&rng, seed)

    cdef vector[int8_t] st = vector[int8_t](n)
    cdef int64_t n_inf = 0
    cdef int64_t i
    for i in range(n):
        st[i] = states0[i]
        n_inf += states0[i]

    cdef vector[int32_t] ea, eb
    cdef unordered_map[uint64_t, int32_t] epos
    cdef int64_t m0 = edges0.shape[0]
    ea.reserve(m0 + 64)
    eb.reserve(m0 + 64)
    epos.reserve(2 * m0 + 64)
    cdef int32_t u, v
    for i in range(m0):
        u = edges0[i, 0]
        v = edges0[i, 1]
        if u > v:
            u, v = v, u
        elist_insert(ea, eb, epos, u, v, n)

    cdef double r_v = alpha * n
    cdef double r_d = a * complete
    cdef double e_unit = max(b, beta)
    cdef double p_disc = b / e_unit if e_unit > 0 else 0.0
    cdef double p_trans = beta / e_unit if e_unit > 0 else 0.0

    cdef vector[double] ev_t
    cdef vector[int8_t] ev_k
    cdef vector[int32_t] ev_a, ev_b

    cdef double t = t0, r_e, total, dt, t_next, pick
    cdef int64_t accepted = 0, rejected = 0, iters = 0
    cdef bint timed_out = False
    cdef int64_t m, s1, s2
    cdef int64_t start, wall_ns = 0, deadline = -1
    with nogil:
        start = cvs_cpu_ns()
        if timeout_s >= 0:
            deadline = start + <int64_t>(timeout_s * 1e9)
        while t < horizon:
            m = <int64_t>ea.size()
            r_e = e_unit * m
            total = r_v + r_e + r_d
            if total == 0.0:
                t = horizon
                break
            dt = -log(cvs_u01(&rng)) / total
            t_next = t + dt
            if t_next > horizon:
                t = horizon
                break
            t = t_next
            pick = cvs_u01co(&rng) * total

            if pick < r_v:
                # node candidate: only an infected node recovers
                v = <int32_t>cvs_below(&rng, n)
                if st[v]:
                    st[v] = 0
                    n_inf -= 1
                    accepted += 1
                    if record:
                        ev_t.push_back(t)
                        ev_k.push_back(K_REC)
                        ev_a.push_back(v)
                        ev_b.push_back(C_NO_NODE)
                else:
                    rejected += 1
            elif pick < r_v + r_e:
                # edge candidate: II may break, SI may transmit
                i = <int64_t>cvs_below(&rng, m)
                u = ea[i]
                v = eb[i]
                s1 = st[u]
                s2 = st[v]
                if s1 == 1 and s2 == 1:
                    if cvs_u01co(&rng) < p_disc:
                        elist_remove(ea, eb, epos, u, v, n)
                        accepted += 1
                        if record:
                            ev_t.push_back(t)
                            ev_k.push_back(K_DISC)
                            ev_a.push_back(u)
                            ev_b.push_back(v)
                    else:
                        rejected += 1
                elif s1 == 1 or s2 == 1:
                    if cvs_u01co(&rng) < p_trans:
                        if s1 == 1:
                            st[v] = 1
                        else:
                            st[u] = 1
                        n_inf += 1
                        accepted += 1
                        if record:
                            ev_t.push_back(t)
                            ev_k.push_back(K_TRANS)
                            ev_a.push_back(u)
                            ev_b.push_back(v)
                    else:
                        rejected += 1
                else:
                    rejected += 1
            else:
                # pair candidate: a non-adjacent all-susceptible pair links up
                u = <int32_t>cvs_below(&rng, n)
                v = <int32_t>cvs_below(&rng, n)
                while v == u:
                    v = <int32_t>cvs_below(&rng, n)
                if u > v:
                    u, v = v, u
                if st[u] == 0 and st[v] == 0 and epos.count(ekey(u, v, n)) == 0:
                    elist_insert(ea, eb, epos, u, v, n)
                    accepted += 1
                    if record:
                        ev_t.push_back(t)
                        ev_k.push_back(K_CONN)
                        ev_a.push_back(u)
                        ev_b.push_back(v)
                else:
                    rejected += 1

            iters += 1
            if max_steps >= 0 and accepted >= max_steps:
                break
            if early_exit and n_inf == 0 and <int64_t>ea.size() == complete:
                t = horizon
                break
            if deadline >= 0 and (iters & ICON_TIMEOUT_MASK) == 0:
                if cvs_cpu_ns() > deadline:
                    timed_out = True
                    break
        wall_ns = cvs_cpu_ns() - start
    return _pack(ev_t, ev_k, ev_a, ev_b, accepted, rejected, wall_ns,
                 timed_out, st, ea, eb, t)


def fast_run(const int8_t[::1] states0, const int32_t[:, ::1] edges0,
             double alpha, double beta, double a, double b,
             double t0, double horizon, uint64_t seed,
             int64_t max_steps, double timeout_s,
             bint early_exit, bint record):
    """Maintained-collection loop; see indexed.py for the semantics."""
    cdef int64_t n = states0.shape[0]
    cdef int64_t complete = n * (n - 1) // 2
    cdef cvs_rng rng
    cvs_seed(&rng, seed)

    cdef vector[int8_t] st = vector[int8_t](n)
    cdef int64_t i, j
    for i in range(n):
        st[i] = states0[i]

    # infected / susceptible membership lists with position maps
    cdef vector[int32_t] inf_list, sus_list
    cdef vector[int32_t] inf_pos = vector[int32_t](n, -1)
    cdef vector[int32_t] sus_pos = vector[int32_t](n, -1)
    cdef int32_t u, v, w, x, p, last
    for i in range(n):
        if st[i]:
            inf_pos[i] = <int32_t>inf_list.size()
            inf_list.push_back(<int32_t>i)
        else:
            sus_pos[i] = <int32_t>sus_list.size()
            sus_list.push_back(<int32_t>i)

    # graph: neighbor lists + membership map; epos value is unused (-1)
    cdef vector[vector[int32_t]] nbr = vector[vector[int32_t]](n)
    cdef unordered_map[uint64_t, int32_t] epos
    cdef int64_t m0 = edges0.shape[0]
    epos.reserve(2 * m0 + 64)

    # per-class collections
    cdef vector[int32_t] si_a, si_b, ii_a, ii_b
    cdef unordered_map[uint64_t, int32_t] si_pos, ii_pos
    cdef vector[int32_t] ss_a, ss_b
    cdef vector[int32_t] ss_pos = vector[int32_t](complete, -1)
    ss_a.reserve(complete)
    ss_b.reserve(complete)

    cdef int64_t k2
    for i in range(m0):
        u = edges0[i, 0]
        v = edges0[i, 1]
        if u > v:
            u, v = v, u
        epos[ekey(u, v, n)] = -1
        nbr[u].push_back(v)
        nbr[v].push_back(u)
        k2 = st[u] + st[v]
        if k2 == 2:
            elist_insert(ii_a, ii_b, ii_pos, u, v, n)
        elif k2 == 1:
            elist_insert(si_a, si_b, si_pos, u, v, n)

    # non-adjacent susceptible pairs, via a scratch neighbor mark;
    # sus_list is in ascending node order here, so u < v comes for free
    cdef vector[uint8_t] mark = vector[uint8_t](n, 0)
    cdef size_t ii_, jj_
    for ii_ in range(sus_list.size()):
        u = sus_list[ii_]
        for j in range(<int64_t>nbr[u].size()):
            mark[nbr[u][j]] = 1
        for jj_ in range(ii_ + 1, sus_list.size()):
            v = sus_list[jj_]
            if not mark[v]:
                pair_insert(ss_a, ss_b, ss_pos, u, v, n)
        for j in range(<int64_t>nbr[u].size()):
            mark[nbr[u][j]] = 0

    cdef vector[double] ev_t
    cdef vector[int8_t] ev_k
    cdef vector[int32_t] ev_a, ev_b

    cdef double t = t0, r_rec, r_trans, r_disc, r_conn, total, dt, t_next, pick
    cdef int64_t accepted = 0
    cdef bint timed_out = False
    cdef int64_t start, wall_ns = 0, deadline = -1
    cdef int8_t kind
    cdef int32_t va, vb, tgt, cmin, cmax
    with nogil:
        start = cvs_cpu_ns()
        if timeout_s >= 0:
            deadline = start + <int64_t>(timeout_s * 1e9)
        while t < horizon:
            r_rec = alpha * <double><int64_t>inf_list.size()
            r_trans = beta * <double><int64_t>si_a.size()
            r_disc = b * <double><int64_t>ii_a.size()
            r_conn = a * <double><int64_t>ss_a.size()
            total = r_rec + r_trans + r_disc + r_conn
            if total == 0.0:
                t = horizon
                break
            dt = -log(cvs_u01(&rng)) / total
            t_next = t + dt
            if t_next > horizon:
                t = horizon
                break
            t = t_next
            pick = cvs_u01co(&rng) * total

            if pick < r_rec:
                kind = K_REC
                va = inf_list[cvs_below(&rng, inf_list.size())]
                vb = C_NO_NODE
                # flip I -> S, reclassify incident edges, regrow pair list
                p = inf_pos[va]
                last = <int32_t>inf_list.size() - 1
                if p != last:
                    w = inf_list[last]
                    inf_list[p] = w
                    inf_pos[w] = p
                inf_list.pop_back()
                inf_pos[va] = -1
                st[va] = 0
                for j in range(<int64_t>nbr[va].size()):
                    w = nbr[va][j]
                    cmin = va if va < w else w
                    cmax = w if va < w else va
                    if st[w]:
                        elist_remove(ii_a, ii_b, ii_pos, cmin, cmax, n)
                        elist_insert(si_a, si_b, si_pos, cmin, cmax, n)
                    else:
                        elist_remove(si_a, si_b, si_pos, cmin, cmax, n)
                    mark[w] = 1
                for j in range(<int64_t>sus_list.size()):
                    x = sus_list[j]
                    if not mark[x]:
                        cmin = va if va < x else x
                        cmax = x if va < x else va
                        pair_insert(ss_a, ss_b, ss_pos, cmin, cmax, n)
                for j in range(<int64_t>nbr[va].size()):
                    mark[nbr[va][j]] = 0
                sus_pos[va] = <int32_t>sus_list.size()
                sus_list.push_back(va)
            elif pick < r_rec + r_trans:
                kind = K_TRANS
                i = <int64_t>cvs_below(&rng, si_a.size())
                va = si_a[i]
                vb = si_b[i]
                tgt = vb if st[va] else va
                # flip S -> I: shed pair entries, then reclassify edges
                p = sus_pos[tgt]
                last = <int32_t>sus_list.size() - 1
                if p != last:
                    w = sus_list[last]
                    sus_list[p] = w
                    sus_pos[w] = p
                sus_list.pop_back()
                sus_pos[tgt] = -1
                for j in range(<int64_t>sus_list.size()):
                    x = sus_list[j]
                    cmin = tgt if tgt < x else x
                    cmax = x if tgt < x else tgt
                    if ss_pos[tri(cmin, cmax, n)] >= 0:
                        pair_remove(ss_a, ss_b, ss_pos, cmin, cmax, n)
                st[tgt] = 1
                inf_pos[tgt] = <int32_t>inf_list.size()
                inf_list.push_back(tgt)
                for j in range(<int64_t>nbr[tgt].size()):
                    w = nbr[tgt][j]
                    cmin = tgt if tgt < w else w
                    cmax = w if tgt < w else tgt
                    if st[w]:
                        elist_remove(si_a, si_b, si_pos, cmin, cmax, n)
                        elist_insert(ii_a, ii_b, ii_pos, cmin, cmax, n)
                    else:
                        elist_insert(si_a, si_b, si_pos, cmin, cmax, n)
            elif pick < r_rec + r_trans + r_disc:
                kind = K_DISC
                i = <int64_t>cvs_below(&rng, ii_a.size())
                va = ii_a[i]
                vb = ii_b[i]
                elist_remove(ii_a, ii_b, ii_pos, va, vb, n)
                epos.erase(ekey(va, vb, n))
                nbr_remove(nbr, va, vb)
                nbr_remove(nbr, vb, va)
            else:
                kind = K_CONN
                i = <int64_t>cvs_below(&rng, ss_a.size())
                va = ss_a[i]
                vb = ss_b[i]
                pair_remove(ss_a, ss_b, ss_pos, va, vb, n)
                epos[ekey(va, vb, n)] = -1
                nbr[va].push_back(vb)
                nbr[vb].push_back(va)
                # both endpoints susceptible: no class list gains the edge

            accepted += 1
            if record:
                ev_t.push_back(t)
                ev_k.push_back(kind)
                ev_a.push_back(va)
                ev_b.push_back(vb)
            if max_steps >= 0 and accepted >= max_steps:
                break
            if early_exit and inf_list.size() == 0 \
                    and <int64_t>epos.size() == complete:
                t = horizon
                break
            if deadline >= 0 and (accepted & FAST_TIMEOUT_MASK) == 0:
                if cvs_cpu_ns() > deadline:
                    timed_out = True
                    break
        wall_ns = cvs_cpu_ns() - start

    # rebuild the plain edge list from the membership map is not possible
    # without order; collect from neighbor lists instead (u < v once)
    cdef vector[int32_t] ea, eb
    ea.reserve(epos.size())
    eb.reserve(epos.size())
    for i in range(n):
        for j in range(<int64_t>nbr[i].size()):
            w = nbr[i][j]
            if i < w:
                ea.push_back(<int32_t>i)
                eb.push_back(w)
    return _pack(ev_t, ev_k, ev_a, ev_b, accepted, 0, wall_ns,
                 timed_out, st, ea, eb, t)


def naive_run(const int8_t[::1] states0, const int32_t[:, ::1] edges0,
              double alpha, double beta, double a, double b,
              double t0, double horizon, uint64_t seed,
              int64_t max_steps, double timeout_s,
              bint early_exit, bint record):
    """Full-enumeration loop; see naive.py for the semantics."""
    cdef int64_t n = states0.shape[0]
    cdef int64_t complete = n * (n - 1) // 2
    cdef cvs_rng rng
    cvs_seed(&rng, seed)

    cdef vector[int8_t] st = vector[int8_t](n)
    cdef int64_t n_inf = 0
    cdef int64_t i, j
    for i in range(n):
        st[i] = states0[i]
        n_inf += states0[i]

    cdef vector[uint8_t] amat = vector[uint8_t](n * n, 0)
    cdef vector[int32_t] ea, eb
    cdef int64_t m0 = edges0.shape[0]
    ea.reserve(m0 + 64)
    eb.reserve(m0 + 64)
    cdef int32_t u, v
    for i in range(m0):
        u = edges0[i, 0]
        v = edges0[i, 1]
        if u > v:
            u, v = v, u
        amat[<int64_t>u * n + v] = 1
        amat[<int64_t>v * n + u] = 1
        ea.push_back(u)
        eb.push_back(v)

    cdef vector[double] ev_t
    cdef vector[int8_t] ev_k
    cdef vector[int32_t] ev_a, ev_b

    cdef double t = t0, best_dt, dt, t_next
    cdef int64_t accepted = 0
    cdef bint timed_out = False
    cdef int64_t start, wall_ns = 0, deadline = -1
    cdef int8_t best_kind, ssum
    cdef int32_t bv1, bv2, last
    cdef int64_t bidx, m, row
    with nogil:
        start = cvs_cpu_ns()
        if timeout_s >= 0:
            deadline = start + <int64_t>(timeout_s * 1e9)
        while t < horizon:
            # fresh exponential per candidate reaction; smallest wins
            best_dt = INFINITY
            best_kind = -1
            bv1 = bv2 = C_NO_NODE
            bidx = -1
            if alpha > 0:
                for i in range(n):
                    if st[i]:
                        dt = -log(cvs_u01(&rng)) / alpha
                        if dt < best_dt:
                            best_dt = dt
                            best_kind = K_REC
                            bv1 = <int32_t>i
                            bv2 = C_NO_NODE
                            bidx = -1
            m = <int64_t>ea.size()
            for i in range(m):
                ssum = st[ea[i]] + st[eb[i]]
                if ssum == 1 and beta > 0:
                    dt = -log(cvs_u01(&rng)) / beta
                    if dt < best_dt:
                        best_dt = dt
                        best_kind = K_TRANS
                        bv1 = ea[i]
                        bv2 = eb[i]
                        bidx = i
                elif ssum == 2 and b > 0:
                    dt = -log(cvs_u01(&rng)) / b
                    if dt < best_dt:
                        best_dt = dt
                        best_kind = K_DISC
                        bv1 = ea[i]
                        bv2 = eb[i]
                        bidx = i
            if a > 0:
                for i in range(n):
                    if st[i]:
                        continue
                    row = i * n
                    for j in range(i + 1, n):
                        if st[j] == 0 and amat[row + j] == 0:
                            dt = -log(cvs_u01(&rng)) / a
                            if dt < best_dt:
                                best_dt = dt
                                best_kind = K_CONN
                                bv1 = <int32_t>i
                                bv2 = <int32_t>j
                                bidx = -1

            if best_kind < 0:
                t = horizon
                break
            t_next = t + best_dt
            if t_next > horizon:
                t = horizon
                break
            t = t_next

            if best_kind == K_REC:
                st[bv1] = 0
                n_inf -= 1
            elif best_kind == K_TRANS:
                if st[bv1]:
                    st[bv2] = 1
                else:
                    st[bv1] = 1
                n_inf += 1
            elif best_kind == K_DISC:
                amat[<int64_t>bv1 * n + bv2] = 0
                amat[<int64_t>bv2 * n + bv1] = 0
                last = <int32_t>ea.size() - 1
                ea[bidx] = ea[last]
                eb[bidx] = eb[last]
                ea.pop_back()
                eb.pop_back()
            else:
                amat[<int64_t>bv1 * n + bv2] = 1
                amat[<int64_t>bv2 * n + bv1] = 1
                ea.push_back(bv1)
                eb.push_back(bv2)

            accepted += 1
            if record:
                ev_t.push_back(t)
                ev_k.push_back(best_kind)
                ev_a.push_back(bv1)
                ev_b.push_back(bv2)
            if max_steps >= 0 and accepted >= max_steps:
                break
            if early_exit and n_inf == 0 and <int64_t>ea.size() == complete:
                t = horizon
                break
            if deadline >= 0 and cvs_cpu_ns() > deadline:
                timed_out = True
                break
        wall_ns = cvs_cpu_ns() - start
    return _pack(ev_t, ev_k, ev_a, ev_b, accepted, 0, wall_ns,
                 timed_out, st, ea, eb, t)
