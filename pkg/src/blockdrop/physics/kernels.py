"""Hot simulation kernels.

Everything here is written as scalar loop code over flat numpy arrays so the
exact same source can run two ways: JIT-compiled by numba (default when numba
is importable) or as plain Python. Setting BLOCKDROP_PURE_NUMPY=1 forces the
plain path. Both paths execute the identical sequence of float64 operations,
so simulations are bit-identical across backends; benchmarks/bench_backends.py
checks that and compares throughput.

Bodies are discs ("balls") and capsules ("bars", optionally carrying a rigid
tip disc at endpoint b, used for ball-tipped pendulum arms). Mobility:
  0 static   -- never moves
  1 free     -- full 3-DOF rigid body
  2 pinned   -- rotates about a fixed world pivot only (1 DOF),
                which preserves the pivot point exactly by construction
"""

import math
import os

import numpy as np


def _want_numba() -> bool:
    if os.environ.get("BLOCKDROP_PURE_NUMPY", "").strip().lower() in ("1", "true", "yes"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _want_numba()

if NUMBA_ENABLED:
    from numba import njit

    def kernel(fn):
        return njit(cache=True, fastmath=False)(fn)
else:

    def kernel(fn):
        return fn


KIND_BALL = 0
KIND_BAR = 1

MOB_STATIC = 0
MOB_FREE = 1
MOB_PINNED = 2

# restitution only kicks in above this approach speed (px/s); below it
# contacts resolve inelastically so resting stacks stay quiet
REST_THRESHOLD = 30.0

_MAXC = 256  # contact buffer; 12 bodies can never come close


@kernel
def _seg_point_closest(ax, ay, bx, by, px, py):
    """Parameter t in [0,1] of the point on segment ab closest to p."""
    dx = bx - ax
    dy = by - ay
    dd = dx * dx + dy * dy
    if dd < 1e-12:
        return 0.0
    t = ((px - ax) * dx + (py - ay) * dy) / dd
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return t


@kernel
def _seg_seg_closest(p1x, p1y, q1x, q1y, p2x, p2y, q2x, q2y):
    """Closest points between segments p1q1 and p2q2 -> (s, t) params."""
    d1x = q1x - p1x
    d1y = q1y - p1y
    d2x = q2x - p2x
    d2y = q2y - p2y
    rx = p1x - p2x
    ry = p1y - p2y
    a = d1x * d1x + d1y * d1y
    e = d2x * d2x + d2y * d2y
    f = d2x * rx + d2y * ry
    if a < 1e-12 and e < 1e-12:
        return 0.0, 0.0
    if a < 1e-12:
        s = 0.0
        t = f / e
    else:
        c = d1x * rx + d1y * ry
        if e < 1e-12:
            t = 0.0
            s = -c / a
        else:
            b = d1x * d2x + d1y * d2y
            denom = a * e - b * b
            if denom > 1e-12:
                s = (b * f - c * e) / denom
            else:
                s = 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = -c / a
            elif t > 1.0:
                t = 1.0
                s = (b - c) / a
    if s < 0.0:
        s = 0.0
    elif s > 1.0:
        s = 1.0
    if a >= 1e-12:
        # re-clamp t for the clamped s
        tx = p1x + d1x * s
        ty = p1y + d1y * s
        t = _seg_point_closest(p2x, p2y, q2x, q2y, tx, ty)
    else:
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    return s, t


@kernel
def _bar_endpoints(i, px, py, ang, ea, eb):
    c = math.cos(ang[i])
    s = math.sin(ang[i])
    ax = px[i] + c * ea[i]
    ay = py[i] + s * ea[i]
    bx = px[i] + c * eb[i]
    by = py[i] + s * eb[i]
    return ax, ay, bx, by


@kernel
def _point_velocity(i, wx, wy, mob, px, py, vx, vy, w, pvx, pvy):
    if mob[i] == MOB_FREE:
        rx = wx - px[i]
        ry = wy - py[i]
        return vx[i] - w[i] * ry, vy[i] + w[i] * rx
    if mob[i] == MOB_PINNED:
        rx = wx - pvx[i]
        ry = wy - pvy[i]
        return -w[i] * ry, w[i] * rx
    return 0.0, 0.0


@kernel
def _apply_impulse(i, wx, wy, jx, jy, mob, px, py, vx, vy, w, pvx, pvy, inv_m, inv_i):
    if mob[i] == MOB_FREE:
        vx[i] += jx * inv_m[i]
        vy[i] += jy * inv_m[i]
        rx = wx - px[i]
        ry = wy - py[i]
        w[i] += inv_i[i] * (rx * jy - ry * jx)
    elif mob[i] == MOB_PINNED:
        rx = wx - pvx[i]
        ry = wy - pvy[i]
        w[i] += inv_i[i] * (rx * jy - ry * jx)


@kernel
def _inv_mass_along(i, wx, wy, nx, ny, mob, px, py, pvx, pvy, inv_m, inv_i):
    if mob[i] == MOB_FREE:
        rx = wx - px[i]
        ry = wy - py[i]
        rn = rx * ny - ry * nx
        return inv_m[i] + inv_i[i] * rn * rn
    if mob[i] == MOB_PINNED:
        rx = wx - pvx[i]
        ry = wy - pvy[i]
        rn = rx * ny - ry * nx
        return inv_i[i] * rn * rn
    return 0.0


@kernel
def control_step(
    # shape / topology (read-only)
    kind, mob, is_red, rad, tiprad, ea, eb, mass, inv_m, inv_i,
    pvx, pvy, prx0, pry0, pang0,
    # mutable state
    px, py, ang, vx, vy, w, alive, in_goal,
    # springs
    sa, sb, sax, say, sbx, sby, srest, sk, sc,
    # goal sensor
    gx0, gx1, gy0, gy1,
    # parameters
    grav, rest_e, mu, beta, slop, dt, n_sub, iters,
):
    """Advance the world by one control step of n_sub fixed substeps."""
    n = px.shape[0]
    n_springs = sa.shape[0]

    c_a = np.empty(_MAXC, np.int64)
    c_b = np.empty(_MAXC, np.int64)
    c_nx = np.empty(_MAXC, np.float64)
    c_ny = np.empty(_MAXC, np.float64)
    c_px = np.empty(_MAXC, np.float64)
    c_py = np.empty(_MAXC, np.float64)
    c_pen = np.empty(_MAXC, np.float64)
    c_kn = np.empty(_MAXC, np.float64)
    c_kt = np.empty(_MAXC, np.float64)
    c_bias = np.empty(_MAXC, np.float64)
    c_ln = np.empty(_MAXC, np.float64)
    c_lt = np.empty(_MAXC, np.float64)

    aabb = np.empty((n, 4), np.float64)
    old_px = np.empty(n, np.float64)
    old_py = np.empty(n, np.float64)

    for _sub in range(n_sub):
        # -- integrate forces into velocities ------------------------------
        for i in range(n):
            if not alive[i]:
                continue
            if mob[i] == MOB_FREE:
                vy[i] += grav * dt
            elif mob[i] == MOB_PINNED:
                # gravity torque about the pivot
                dx = px[i] - pvx[i]
                w[i] += dx * mass[i] * grav * inv_i[i] * dt

        for j in range(n_springs):
            ia = sa[j]
            ib = sb[j]
            if not alive[ia]:
                continue
            if ib >= 0 and not alive[ib]:
                continue
            ca = math.cos(ang[ia])
            sn = math.sin(ang[ia])
            wax = px[ia] + ca * sax[j] - sn * say[j]
            way = py[ia] + sn * sax[j] + ca * say[j]
            if ib >= 0:
                cb = math.cos(ang[ib])
                sb_ = math.sin(ang[ib])
                wbx = px[ib] + cb * sbx[j] - sb_ * sby[j]
                wby = py[ib] + sb_ * sbx[j] + cb * sby[j]
            else:
                wbx = sbx[j]
                wby = sby[j]
            dx = wax - wbx
            dy = way - wby
            ln = math.sqrt(dx * dx + dy * dy)
            if ln < 1e-9:
                continue
            ux = dx / ln
            uy = dy / ln
            vax, vay = _point_velocity(ia, wax, way, mob, px, py, vx, vy, w, pvx, pvy)
            if ib >= 0:
                vbx_, vby_ = _point_velocity(ib, wbx, wby, mob, px, py, vx, vy, w, pvx, pvy)
            else:
                vbx_ = 0.0
                vby_ = 0.0
            vrel = (vax - vbx_) * ux + (vay - vby_) * uy
            f = -sk[j] * (ln - srest[j]) - sc[j] * vrel
            jx = f * ux * dt
            jy = f * uy * dt
            _apply_impulse(ia, wax, way, jx, jy, mob, px, py, vx, vy, w, pvx, pvy, inv_m, inv_i)
            if ib >= 0:
                _apply_impulse(ib, wbx, wby, -jx, -jy, mob, px, py, vx, vy, w, pvx, pvy, inv_m, inv_i)

        # -- contact detection at current poses ----------------------------
        for i in range(n):
            if not alive[i]:
                aabb[i, 0] = 1e18
                aabb[i, 1] = 1e18
                aabb[i, 2] = -1e18
                aabb[i, 3] = -1e18
                continue
            if kind[i] == KIND_BALL:
                aabb[i, 0] = px[i] - rad[i]
                aabb[i, 1] = py[i] - rad[i]
                aabb[i, 2] = px[i] + rad[i]
                aabb[i, 3] = py[i] + rad[i]
            else:
                ax, ay, bx, by = _bar_endpoints(i, px, py, ang, ea, eb)
                r = rad[i]
                if tiprad[i] > r:
                    r = tiprad[i]
                aabb[i, 0] = min(ax, bx) - r
                aabb[i, 1] = min(ay, by) - r
                aabb[i, 2] = max(ax, bx) + r
                aabb[i, 3] = max(ay, by) + r

        nc = 0
        for i in range(n):
            if not alive[i]:
                continue
            for j in range(i + 1, n):
                if not alive[j]:
                    continue
                if mob[i] == MOB_STATIC and mob[j] == MOB_STATIC:
                    continue
                if (
                    aabb[i, 0] > aabb[j, 2] + 1.0
                    or aabb[j, 0] > aabb[i, 2] + 1.0
                    or aabb[i, 1] > aabb[j, 3] + 1.0
                    or aabb[j, 1] > aabb[i, 3] + 1.0
                ):
                    continue
                # collider sets: primary (0) plus optional tip disc (1)
                na = 2 if (kind[i] == KIND_BAR and tiprad[i] > 0.0) else 1
                nb = 2 if (kind[j] == KIND_BAR and tiprad[j] > 0.0) else 1
                for cai in range(na):
                    for cbi in range(nb):
                        if nc >= _MAXC - 2:
                            continue
                        # resolve collider geometry: circle or capsule
                        # a-side
                        if kind[i] == KIND_BALL:
                            a_is_circle = True
                            acx, acy = px[i], py[i]
                            ar = rad[i]
                            aax = aay = abx = aby = 0.0
                        elif cai == 1:
                            a_is_circle = True
                            _, _, acx, acy = _bar_endpoints(i, px, py, ang, ea, eb)
                            ar = tiprad[i]
                            aax = aay = abx = aby = 0.0
                        else:
                            a_is_circle = False
                            aax, aay, abx, aby = _bar_endpoints(i, px, py, ang, ea, eb)
                            ar = rad[i]
                            acx = acy = 0.0
                        # b-side
                        if kind[j] == KIND_BALL:
                            b_is_circle = True
                            bcx, bcy = px[j], py[j]
                            br = rad[j]
                            bax = bay = bbx = bby = 0.0
                        elif cbi == 1:
                            b_is_circle = True
                            _, _, bcx, bcy = _bar_endpoints(j, px, py, ang, ea, eb)
                            br = tiprad[j]
                            bax = bay = bbx = bby = 0.0
                        else:
                            b_is_circle = False
                            bax, bay, bbx, bby = _bar_endpoints(j, px, py, ang, ea, eb)
                            br = rad[j]
                            bcx = bcy = 0.0

                        rsum = ar + br
                        if a_is_circle and b_is_circle:
                            dx = bcx - acx
                            dy = bcy - acy
                            d2 = dx * dx + dy * dy
                            if d2 < rsum * rsum:
                                d = math.sqrt(d2)
                                if d > 1e-9:
                                    nx = dx / d
                                    ny = dy / d
                                else:
                                    nx = 0.0
                                    ny = 1.0
                                    d = 0.0
                                c_a[nc] = i
                                c_b[nc] = j
                                c_nx[nc] = nx
                                c_ny[nc] = ny
                                c_pen[nc] = rsum - d
                                c_px[nc] = acx + nx * (ar - 0.5 * c_pen[nc])
                                c_py[nc] = acy + ny * (ar - 0.5 * c_pen[nc])
                                nc += 1
                        elif a_is_circle or b_is_circle:
                            if a_is_circle:
                                ccx, ccy, cr = acx, acy, ar
                                sx0, sy0, sx1, sy1, sr = bax, bay, bbx, bby, br
                                flip = False
                            else:
                                ccx, ccy, cr = bcx, bcy, br
                                sx0, sy0, sx1, sy1, sr = aax, aay, abx, aby, ar
                                flip = True
                            t = _seg_point_closest(sx0, sy0, sx1, sy1, ccx, ccy)
                            qx = sx0 + (sx1 - sx0) * t
                            qy = sy0 + (sy1 - sy0) * t
                            dx = qx - ccx
                            dy = qy - ccy
                            d2 = dx * dx + dy * dy
                            if d2 < rsum * rsum:
                                d = math.sqrt(d2)
                                if d > 1e-9:
                                    nx = dx / d
                                    ny = dy / d
                                else:
                                    nx = 0.0
                                    ny = 1.0
                                    d = 0.0
                                if flip:
                                    # normal must point from body i to body j
                                    nx = -nx
                                    ny = -ny
                                c_a[nc] = i
                                c_b[nc] = j
                                c_nx[nc] = nx
                                c_ny[nc] = ny
                                c_pen[nc] = rsum - d
                                c_px[nc] = ccx + (qx - ccx) * (cr / rsum if rsum > 0 else 0.5)
                                c_py[nc] = ccy + (qy - ccy) * (cr / rsum if rsum > 0 else 0.5)
                                nc += 1
                        else:
                            # capsule vs capsule: closest pair, plus a second
                            # contact for near-parallel overlap so flat bars
                            # can rest on each other without rocking
                            s, t = _seg_seg_closest(aax, aay, abx, aby, bax, bay, bbx, bby)
                            px1 = aax + (abx - aax) * s
                            py1 = aay + (aby - aay) * s
                            qx1 = bax + (bbx - bax) * t
                            qy1 = bay + (bby - bay) * t
                            dx = qx1 - px1
                            dy = qy1 - py1
                            d2 = dx * dx + dy * dy
                            if d2 < rsum * rsum:
                                d = math.sqrt(d2)
                                if d > 1e-9:
                                    nx = dx / d
                                    ny = dy / d
                                else:
                                    ux = abx - aax
                                    uy = aby - aay
                                    ul = math.sqrt(ux * ux + uy * uy)
                                    if ul > 1e-9:
                                        nx = -uy / ul
                                        ny = ux / ul
                                    else:
                                        nx = 0.0
                                        ny = 1.0
                                    d = 0.0
                                c_a[nc] = i
                                c_b[nc] = j
                                c_nx[nc] = nx
                                c_ny[nc] = ny
                                c_pen[nc] = rsum - d
                                c_px[nc] = 0.5 * (px1 + qx1)
                                c_py[nc] = 0.5 * (py1 + qy1)
                                first_px = c_px[nc]
                                first_py = c_py[nc]
                                nc += 1
                                # near-parallel second contact
                                d1x = abx - aax
                                d1y = aby - aay
                                d2x_ = bbx - bax
                                d2y_ = bby - bay
                                crossm = abs(d1x * d2y_ - d1y * d2x_)
                                l1 = math.sqrt(d1x * d1x + d1y * d1y)
                                l2 = math.sqrt(d2x_ * d2x_ + d2y_ * d2y_)
                                if crossm < 0.05 * l1 * l2:
                                    best_pen = -1.0
                                    bpx = 0.0
                                    bpy = 0.0
                                    bnx = 0.0
                                    bny = 0.0
                                    for ei in range(4):
                                        if ei == 0:
                                            exq, eyq = bax, bay
                                            on_a = True
                                        elif ei == 1:
                                            exq, eyq = bbx, bby
                                            on_a = True
                                        elif ei == 2:
                                            exq, eyq = aax, aay
                                            on_a = False
                                        else:
                                            exq, eyq = abx, aby
                                            on_a = False
                                        if on_a:
                                            tt = _seg_point_closest(aax, aay, abx, aby, exq, eyq)
                                            zx = aax + (abx - aax) * tt
                                            zy = aay + (aby - aay) * tt
                                            ddx = exq - zx
                                            ddy = eyq - zy
                                        else:
                                            tt = _seg_point_closest(bax, bay, bbx, bby, exq, eyq)
                                            zx = bax + (bbx - bax) * tt
                                            zy = bay + (bby - bay) * tt
                                            ddx = zx - exq
                                            ddy = zy - eyq
                                        dd = math.sqrt(ddx * ddx + ddy * ddy)
                                        pen2 = rsum - dd
                                        if pen2 <= 0.0:
                                            continue
                                        cx2 = 0.5 * (exq + zx)
                                        cy2 = 0.5 * (eyq + zy)
                                        sep = abs(cx2 - first_px) + abs(cy2 - first_py)
                                        if sep < 2.0:
                                            continue
                                        if pen2 > best_pen:
                                            best_pen = pen2
                                            bpx = cx2
                                            bpy = cy2
                                            if dd > 1e-9:
                                                bnx = ddx / dd
                                                bny = ddy / dd
                                            else:
                                                bnx = nx
                                                bny = ny
                                    if best_pen > 0.0:
                                        c_a[nc] = i
                                        c_b[nc] = j
                                        c_nx[nc] = bnx
                                        c_ny[nc] = bny
                                        c_pen[nc] = best_pen
                                        c_px[nc] = bpx
                                        c_py[nc] = bpy
                                        nc += 1

        # -- precompute solver terms ---------------------------------------
        for k in range(nc):
            ia = c_a[k]
            ib = c_b[k]
            nx = c_nx[k]
            ny = c_ny[k]
            wx_ = c_px[k]
            wy_ = c_py[k]
            tx = -ny
            ty = nx
            kn = _inv_mass_along(ia, wx_, wy_, nx, ny, mob, px, py, pvx, pvy, inv_m, inv_i) + _inv_mass_along(
                ib, wx_, wy_, nx, ny, mob, px, py, pvx, pvy, inv_m, inv_i
            )
            kt = _inv_mass_along(ia, wx_, wy_, tx, ty, mob, px, py, pvx, pvy, inv_m, inv_i) + _inv_mass_along(
                ib, wx_, wy_, tx, ty, mob, px, py, pvx, pvy, inv_m, inv_i
            )
            c_kn[k] = kn if kn > 1e-12 else 1e-12
            c_kt[k] = kt if kt > 1e-12 else 1e-12
            vax, vay = _point_velocity(ia, wx_, wy_, mob, px, py, vx, vy, w, pvx, pvy)
            vbx_, vby_ = _point_velocity(ib, wx_, wy_, mob, px, py, vx, vy, w, pvx, pvy)
            vn0 = (vbx_ - vax) * nx + (vby_ - vay) * ny
            bounce = 0.0
            if vn0 < -REST_THRESHOLD:
                bounce = -rest_e * vn0
            pen_err = c_pen[k] - slop
            if pen_err < 0.0:
                pen_err = 0.0
            c_bias[k] = bounce + beta * pen_err / dt
            c_ln[k] = 0.0
            c_lt[k] = 0.0

        # -- sequential impulse iterations ----------------------------------
        for _it in range(iters):
            for k in range(nc):
                ia = c_a[k]
                ib = c_b[k]
                nx = c_nx[k]
                ny = c_ny[k]
                wx_ = c_px[k]
                wy_ = c_py[k]
                vax, vay = _point_velocity(ia, wx_, wy_, mob, px, py, vx, vy, w, pvx, pvy)
                vbx_, vby_ = _point_velocity(ib, wx_, wy_, mob, px, py, vx, vy, w, pvx, pvy)
                vn = (vbx_ - vax) * nx + (vby_ - vay) * ny
                dl = -(vn - c_bias[k]) / c_kn[k]
                old = c_ln[k]
                new = old + dl
                if new < 0.0:
                    new = 0.0
                dl = new - old
                c_ln[k] = new
                jx = dl * nx
                jy = dl * ny
                _apply_impulse(ia, wx_, wy_, -jx, -jy, mob, px, py, vx, vy, w, pvx, pvy, inv_m, inv_i)
                _apply_impulse(ib, wx_, wy_, jx, jy, mob, px, py, vx, vy, w, pvx, pvy, inv_m, inv_i)

                # friction along the tangent, clamped by the normal impulse
                tx = -ny
                ty = nx
                vax, vay = _point_velocity(ia, wx_, wy_, mob, px, py, vx, vy, w, pvx, pvy)
                vbx_, vby_ = _point_velocity(ib, wx_, wy_, mob, px, py, vx, vy, w, pvx, pvy)
                vt = (vbx_ - vax) * tx + (vby_ - vay) * ty
                dlt = -vt / c_kt[k]
                maxf = mu * c_ln[k]
                oldt = c_lt[k]
                newt = oldt + dlt
                if newt > maxf:
                    newt = maxf
                elif newt < -maxf:
                    newt = -maxf
                dlt = newt - oldt
                c_lt[k] = newt
                jx = dlt * tx
                jy = dlt * ty
                _apply_impulse(ia, wx_, wy_, -jx, -jy, mob, px, py, vx, vy, w, pvx, pvy, inv_m, inv_i)
                _apply_impulse(ib, wx_, wy_, jx, jy, mob, px, py, vx, vy, w, pvx, pvy, inv_m, inv_i)

        # -- integrate positions --------------------------------------------
        for i in range(n):
            old_px[i] = px[i]
            old_py[i] = py[i]
            if not alive[i]:
                continue
            if mob[i] == MOB_FREE:
                px[i] += vx[i] * dt
                py[i] += vy[i] * dt
                ang[i] += w[i] * dt
            elif mob[i] == MOB_PINNED:
                # center derived from the pivot: drift-free by construction
                ang[i] += w[i] * dt
                da = ang[i] - pang0[i]
                ca = math.cos(da)
                sn = math.sin(da)
                px[i] = pvx[i] + ca * prx0[i] - sn * pry0[i]
                py[i] = pvy[i] + sn * prx0[i] + ca * pry0[i]

        # -- tunneling guard: swept check for fast balls vs bar cores -------
        for i in range(n):
            if not alive[i] or kind[i] != KIND_BALL or mob[i] != MOB_FREE:
                continue
            mdx = px[i] - old_px[i]
            mdy = py[i] - old_py[i]
            if mdx * mdx + mdy * mdy < 1.0:
                continue
            for j in range(n):
                if j == i or not alive[j] or kind[j] != KIND_BAR:
                    continue
                bax, bay, bbx, bby = _bar_endpoints(j, px, py, ang, ea, eb)
                rsum = rad[i] + rad[j]
                # distance at the new position
                t_new = _seg_point_closest(bax, bay, bbx, bby, px[i], py[i])
                zx = bax + (bbx - bax) * t_new
                zy = bay + (bby - bay) * t_new
                ddx = px[i] - zx
                ddy = py[i] - zy
                d_new = math.sqrt(ddx * ddx + ddy * ddy)
                if d_new <= rsum:
                    continue  # overlapping: the discrete solver handles it
                # proper crossing of the movement segment with the bar core;
                # grazing the contact halo without crossing is left to the
                # discrete solver, else resting contacts would freeze
                o1 = (bbx - bax) * (old_py[i] - bay) - (bby - bay) * (old_px[i] - bax)
                o2 = (bbx - bax) * (py[i] - bay) - (bby - bay) * (px[i] - bax)
                o3 = mdx * (bay - old_py[i]) - mdy * (bax - old_px[i])
                o4 = mdx * (bby - old_py[i]) - mdy * (bbx - old_px[i])
                if not (o1 * o2 < 0.0 and o3 * o4 < 0.0):
                    continue
                # crossed through: land on the first sample inside the halo so
                # the next substep's contact pass resolves it impulsively
                steps = 64
                for sstep in range(1, steps + 1):
                    tau = sstep / steps
                    cx1 = old_px[i] + mdx * tau
                    cy1 = old_py[i] + mdy * tau
                    tt = _seg_point_closest(bax, bay, bbx, bby, cx1, cy1)
                    zx = bax + (bbx - bax) * tt
                    zy = bay + (bby - bay) * tt
                    ddx = cx1 - zx
                    ddy = cy1 - zy
                    if ddx * ddx + ddy * ddy <= rsum * rsum:
                        px[i] = cx1
                        py[i] = cy1
                        break

        # -- goal sensor latch ----------------------------------------------
        for i in range(n):
            if alive[i] and is_red[i] and not in_goal[i]:
                if gx0 <= px[i] <= gx1 and gy0 <= py[i] <= gy1:
                    in_goal[i] = True


@kernel
def all_red_in_goal(is_red, in_goal):
    n = is_red.shape[0]
    for i in range(n):
        if is_red[i] and not in_goal[i]:
            return False
    return True


@kernel
def run_episode(
    kind, mob, is_red, rad, tiprad, ea, eb, mass, inv_m, inv_i,
    pvx, pvy, prx0, pry0, pang0,
    px, py, ang, vx, vy, w, alive, in_goal,
    sa, sb, sax, say, sbx, sby, srest, sk, sc,
    gx0, gx1, gy0, gy1,
    grav, rest_e, mu, beta, slop, dt, n_sub, iters,
    sched_step, sched_body, max_steps,
):
    """Run a full episode with a pre-sorted elimination schedule.

    Returns (steps_elapsed, success, eliminations). State arrays are mutated;
    callers pass per-episode copies. The step sequence is identical to
    driving control_step one call at a time, so outcomes match the
    recording path bit for bit.
    """
    si = 0
    n_sched = sched_step.shape[0]
    elims = 0
    for step in range(max_steps):
        while si < n_sched and sched_step[si] == step:
            b = sched_body[si]
            if alive[b]:
                alive[b] = False
                elims += 1
            si += 1
        control_step(
            kind, mob, is_red, rad, tiprad, ea, eb, mass, inv_m, inv_i,
            pvx, pvy, prx0, pry0, pang0,
            px, py, ang, vx, vy, w, alive, in_goal,
            sa, sb, sax, say, sbx, sby, srest, sk, sc,
            gx0, gx1, gy0, gy1,
            grav, rest_e, mu, beta, slop, dt, n_sub, iters,
        )
        if all_red_in_goal(is_red, in_goal):
            return step + 1, True, elims
    return max_steps, False, elims
