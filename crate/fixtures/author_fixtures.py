#!/usr/bin/env python3
"""Regenerate the fixture corpus and its hand-checkable expected outputs.

Expected values are computed here with plain Python, independently of the
Rust code. Run from the repository root:

    python3 fixtures/author_fixtures.py
"""

import csv
import json
import math
import random
from collections import Counter, defaultdict
from pathlib import Path

ROOT = Path(__file__).resolve().parent

TOPIC_TRANSFER = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"
TOPIC_SWAP_V2 = "0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822"
TOPIC_SWAP_V3 = "0xc42079f94a6350d7e6235f29174924f928cc2ac818eb64fed8004e115fbcca67"
TOPIC_SWAP_V4 = "0x40e9cecb9f5f1f1c5b9c97dec2917b7ee92e57ba5563708daca94dd84ad7112f"

SEL = {
    "exactInputSingle": "0x414bf389",
    "swapExactTokensForTokens": "0x38ed1739",
    "execute": "0x3593564c",
    "swap_v2": "0x022c0d9f",
    "swap_v3": "0x128acb08",
    "unlock": "0x48c89491",
    "swap_v4": "0xf3cd914c",
    "settle": "0x11da60b4",
    "take": "0x0b0d9c09",
    "transfer": "0xa9059cbb",
    "transferFrom": "0x23b872dd",
    "balanceOf": "0x70a08231",
    "approve": "0x095ea7b3",
    "slot0": "0x3850c7bd",
    "getReserves": "0x0902f1ac",
    "callback_v3": "0xfa461e33",
    "mint": "0x40c10f19",
    "run": "0xc0406226",
    "extsload": "0x1e2eaeaf",
}


def addr(tag, n):
    return "0x" + f"{tag:02x}" + f"{n:038x}"


# Label library ---------------------------------------------------------------

ROUTER_V2 = addr(0x10, 2)
ROUTER_V3 = addr(0x10, 3)
UNIVERSAL_ROUTER = addr(0x10, 4)
POOL_V2_WBTC_WETH = addr(0x20, 1)
POOL_V2_USDC_WETH = addr(0x20, 2)
POOL_SUSHI_USDC_WETH = addr(0x20, 3)
POOL_V3_USDC_WETH = addr(0x30, 1)
POOL_V3_WETH_OP = addr(0x30, 2)
POOL_V3_USDC_USDT = addr(0x30, 3)
POOL_MANAGER = addr(0x40, 1)
USDC = addr(0x50, 1)
WETH = addr(0x50, 2)
USDT = addr(0x50, 3)
WBTC = addr(0x50, 4)
OP = addr(0x50, 5)
BOT_A = addr(0x60, 1)
BOT_B = addr(0x60, 2)
BOT_C = addr(0x60, 3)
HELPER_LIB = addr(0x60, 9)
NFT = addr(0x70, 1)
AGGREGATOR = addr(0x70, 2)
EXCHANGE = addr(0x70, 3)
EOA = [addr(0x90, i) for i in range(1, 6)]
UNLABELED = addr(0x99, 1)

LABELS = [
    # address, kind, dex, pair, fee_tier, owner_label, has_code
    (ROUTER_V2, "router", "uniswap_v2", "", "", "", "true"),
    (ROUTER_V3, "router", "uniswap_v3", "", "", "", "true"),
    (UNIVERSAL_ROUTER, "router", "uniswap_v4", "", "", "", "true"),
    (POOL_V2_WBTC_WETH, "pool_v2", "uniswap_v2", "WBTC-WETH", "3000", "", "true"),
    (POOL_V2_USDC_WETH, "pool_v2", "uniswap_v2", "USDC-WETH", "3000", "", "true"),
    (POOL_SUSHI_USDC_WETH, "pool_v2", "sushiswap", "USDC-WETH", "3000", "", "true"),
    (POOL_V3_USDC_WETH, "pool_v3", "uniswap_v3", "USDC-WETH", "500", "", "true"),
    (POOL_V3_WETH_OP, "pool_v3", "uniswap_v3", "OP-WETH", "3000", "", "true"),
    (POOL_V3_USDC_USDT, "pool_v3", "uniswap_v3", "USDC-USDT", "100", "", "true"),
    (POOL_MANAGER, "pool_manager_v4", "uniswap_v4", "", "", "", "true"),
    (USDC, "token", "", "USDC", "", "", "true"),
    (WETH, "token", "", "WETH", "", "", "true"),
    (USDT, "token", "", "USDT", "", "", "true"),
    (WBTC, "token", "", "WBTC", "", "", "true"),
    (OP, "token", "", "OP", "", "", "true"),
    (NFT, "other", "", "", "", "", "true"),
    (AGGREGATOR, "other", "", "", "", "", "true"),
    (EXCHANGE, "other", "", "", "", "exchange", "false"),
]
LABEL_BY_ADDR = {row[0]: row for row in LABELS}
HEADER_LABELS = ["address", "kind", "dex", "pair", "fee_tier", "owner_label", "has_code"]


# Trace corpus ----------------------------------------------------------------


def f(frm, to, kind="call", sel=None, children=()):
    return {"from": frm, "to": to, "kind": kind, "sel": sel, "children": list(children)}


def materialize(node, depth=0, upper=False):
    out = {
        "from_address": node["from"].upper().replace("0X", "0x") if upper else node["from"],
        "to_address": node["to"],
        "call_kind": node["kind"],
        "depth": depth,
    }
    if node["sel"] is not None:
        out["selector"] = SEL[node["sel"]]
    if node["children"]:
        out["children"] = [materialize(c, depth + 1, upper) for c in node["children"]]
    return out


def edges_of(node):
    yield node
    for c in node["children"]:
        yield from edges_of(c)


def v3_swap_revert():
    return f(EOA[0], ROUTER_V3, sel="exactInputSingle", children=[
        f(ROUTER_V3, POOL_V3_USDC_WETH, sel="swap_v3", children=[
            f(POOL_V3_USDC_WETH, WETH, sel="transfer"),
            f(POOL_V3_USDC_WETH, USDC, "staticcall", "balanceOf"),
            f(POOL_V3_USDC_WETH, ROUTER_V3, sel="callback_v3", children=[
                f(ROUTER_V3, USDC, sel="transferFrom"),
            ]),
            f(POOL_V3_USDC_WETH, USDC, "staticcall", "balanceOf"),
        ]),
    ])


# (name, tree, status, logs) ; logs is None when no success-path log exists.
CORPUS = [
    ("v3_router_usdc_weth", v3_swap_revert(), "reverted", [
        ("transfer", WETH), ("transfer", USDC), ("swap_v3", POOL_V3_USDC_WETH)]),
    ("v2_direct_wbtc_weth", f(EOA[1], BOT_A, sel="run", children=[
        f(BOT_A, POOL_V2_WBTC_WETH, "staticcall", "getReserves"),
        f(BOT_A, WBTC, sel="transfer"),
        f(BOT_A, POOL_V2_WBTC_WETH, sel="swap_v2", children=[
            f(POOL_V2_WBTC_WETH, WETH, sel="transfer"),
        ]),
    ]), "reverted", [("transfer", WBTC), ("transfer", WETH), ("swap_v2", POOL_V2_WBTC_WETH)]),
    ("v3_direct_weth_op", f(EOA[1], BOT_A, sel="run", children=[
        f(BOT_A, POOL_V3_WETH_OP, sel="swap_v3", children=[
            f(POOL_V3_WETH_OP, OP, sel="transfer"),
            f(POOL_V3_WETH_OP, BOT_A, sel="callback_v3", children=[
                f(BOT_A, WETH, sel="transfer"),
            ]),
        ]),
    ]), "reverted", [("transfer", OP), ("transfer", WETH), ("swap_v3", POOL_V3_WETH_OP)]),
    ("v4_direct_usdc_weth", f(EOA[2], BOT_B, sel="run", children=[
        f(BOT_B, POOL_MANAGER, sel="unlock", children=[
            f(POOL_MANAGER, BOT_B, sel="run", children=[
                f(BOT_B, POOL_MANAGER, sel="swap_v4"),
                f(BOT_B, USDC, sel="transfer"),
                f(BOT_B, POOL_MANAGER, sel="settle", children=[
                    f(POOL_MANAGER, USDC, "staticcall", "balanceOf"),
                ]),
                f(BOT_B, POOL_MANAGER, sel="take", children=[
                    f(POOL_MANAGER, WETH, sel="transfer"),
                ]),
            ]),
        ]),
    ]), "reverted", [("swap_v4", POOL_MANAGER), ("transfer", USDC), ("transfer", WETH)]),
    ("v4_router_usdt_weth", f(EOA[0], UNIVERSAL_ROUTER, sel="execute", children=[
        f(UNIVERSAL_ROUTER, POOL_MANAGER, sel="unlock", children=[
            f(POOL_MANAGER, UNIVERSAL_ROUTER, sel="run", children=[
                f(UNIVERSAL_ROUTER, POOL_MANAGER, sel="swap_v4"),
                f(UNIVERSAL_ROUTER, WETH, "staticcall", "balanceOf"),
                f(UNIVERSAL_ROUTER, USDT, sel="transferFrom"),
            ]),
        ]),
    ]), "reverted", [("swap_v4", POOL_MANAGER), ("transfer", WETH), ("transfer", USDT)]),
    ("multihop_v2_then_v3", f(EOA[3], ROUTER_V2, sel="swapExactTokensForTokens", children=[
        f(ROUTER_V2, USDC, sel="transferFrom"),
        f(ROUTER_V2, POOL_V2_USDC_WETH, sel="swap_v2", children=[
            f(POOL_V2_USDC_WETH, WETH, sel="transfer"),
        ]),
        f(ROUTER_V2, POOL_V3_WETH_OP, sel="swap_v3", children=[
            f(POOL_V3_WETH_OP, OP, sel="transfer"),
        ]),
    ]), "reverted", [("transfer", USDC), ("swap_v2", POOL_V2_USDC_WETH), ("swap_v3", POOL_V3_WETH_OP)]),
    ("quote_then_sushi", f(EOA[1], BOT_A, sel="run", children=[
        f(BOT_A, POOL_V3_USDC_USDT, "staticcall", "slot0"),
        f(BOT_A, POOL_SUSHI_USDC_WETH, sel="swap_v2", children=[
            f(POOL_SUSHI_USDC_WETH, USDC, sel="transfer"),
        ]),
    ]), "reverted", None),
    ("v3_before_v4", f(EOA[2], BOT_C, sel="run", children=[
        f(BOT_C, POOL_V3_USDC_WETH, sel="swap_v3"),
        f(BOT_C, POOL_MANAGER, sel="unlock", children=[
            f(POOL_MANAGER, USDC, sel="transfer"),
            f(POOL_MANAGER, WETH, "staticcall", "balanceOf"),
        ]),
    ]), "success", None),
    ("delegate_then_v3_usdc_usdt", f(EOA[2], BOT_C, sel="run", children=[
        f(BOT_C, HELPER_LIB, "delegatecall", "run", children=[
            f(BOT_C, POOL_V3_USDC_USDT, sel="swap_v3"),
        ]),
    ]), "reverted", None),
    ("v2_direct_usdc_weth", f(EOA[1], BOT_A, sel="run", children=[
        f(BOT_A, USDC, sel="transfer"),
        f(BOT_A, POOL_V2_USDC_WETH, sel="swap_v2", children=[
            f(POOL_V2_USDC_WETH, WETH, sel="transfer"),
            f(POOL_V2_USDC_WETH, USDC, "staticcall", "balanceOf"),
            f(POOL_V2_USDC_WETH, WETH, "staticcall", "balanceOf"),
        ]),
    ]), "reverted", [("transfer", USDC), ("transfer", WETH), ("swap_v2", POOL_V2_USDC_WETH)]),
    # Non-swaps.
    ("v4_one_token", f(EOA[2], BOT_B, sel="run", children=[
        f(BOT_B, POOL_MANAGER, sel="unlock", children=[
            f(POOL_MANAGER, USDC, sel="transfer"),
        ]),
        f(BOT_B, USDC, "staticcall", "balanceOf"),
    ]), "reverted", None),
    ("plain_transfer", f(EOA[4], EOA[3]), "reverted", None),
    ("token_approve", f(EOA[3], USDC, sel="approve"), "reverted", None),
    ("pool_quote_only", f(EOA[1], BOT_A, sel="run", children=[
        f(BOT_A, POOL_V3_USDC_WETH, "staticcall", "slot0"),
        f(BOT_A, POOL_V2_WBTC_WETH, "staticcall", "getReserves"),
    ]), "reverted", None),
    ("router_early_revert", f(EOA[0], ROUTER_V3, sel="exactInputSingle", children=[
        f(ROUTER_V3, USDC, sel="transferFrom"),
    ]), "reverted", None),
    ("nft_mint", f(EOA[4], NFT, sel="mint", children=[
        f(NFT, WETH, sel="transferFrom"),
    ]), "success", None),
    ("tokens_without_manager", f(EOA[3], AGGREGATOR, sel="run", children=[
        f(AGGREGATOR, USDC, sel="transferFrom"),
        f(AGGREGATOR, WETH, sel="transfer"),
    ]), "reverted", None),
    ("manager_staticcall_only", f(EOA[2], BOT_B, sel="run", children=[
        f(BOT_B, POOL_MANAGER, "staticcall", "extsload"),
        f(BOT_B, USDC, "staticcall", "balanceOf"),
        f(BOT_B, WETH, "staticcall", "balanceOf"),
    ]), "reverted", None),
    ("unlabeled_chain", f(EOA[4], UNLABELED, sel="run", children=[
        f(UNLABELED, addr(0x99, 2), sel="run", children=[
            f(addr(0x99, 2), addr(0x99, 3), sel="run"),
        ]),
    ]), "reverted", None),
    ("contract_create", f(EOA[0], addr(0x99, 4), "create", None, children=[
        f(addr(0x99, 4), EXCHANGE, sel="run"),
    ]), "reverted", None),
]


def classify(tree):
    """Reference classifier written from the rule text."""
    edges = list(edges_of(tree))
    pools, managers, tokens, seen = [], [], [], set()
    for i, e in enumerate(edges):
        lab = LABEL_BY_ADDR.get(e["to"])
        if lab is None:
            continue
        kind = lab[1]
        if kind in ("pool_v2", "pool_v3") and e["kind"] == "call":
            pools.append((i, lab))
        elif kind == "pool_manager_v4" and e["kind"] == "call":
            managers.append((i, lab))
        elif kind == "token" and e["kind"] in ("call", "staticcall") and lab[0] not in seen:
            seen.add(lab[0])
            tokens.append((i, lab))
    v4 = bool(managers) and len(tokens) >= 2
    cands = pools[:1] + (managers[:1] if v4 else [])
    if not cands:
        return {"is_swap": False, "dex": None, "pool": None, "pair": None}
    i, lab = min(cands, key=lambda c: c[0])
    if lab[1] == "pool_manager_v4":
        pair = "-".join(sorted([tokens[0][1][3], tokens[1][1][3]]))
    else:
        pair = lab[3]
    return {"is_swap": True, "dex": lab[2], "pool": lab[0], "pair": pair}


def tx_hash(i):
    return "0x" + f"{0x7a:02x}" + f"{i:062x}"


def log_entry(kind, address, i):
    topic0 = {
        "transfer": TOPIC_TRANSFER,
        "swap_v2": TOPIC_SWAP_V2,
        "swap_v3": TOPIC_SWAP_V3,
        "swap_v4": TOPIC_SWAP_V4,
    }[kind]
    topics = [topic0]
    if kind == "swap_v4":
        topics.append("0x" + f"{i:064x}")
    return {"address": address, "topics": topics}


def write_corpus():
    trace_dir = ROOT / "traces"
    trace_dir.mkdir(exist_ok=True)
    for old in trace_dir.glob("*.json"):
        old.unlink()
    log_dir = ROOT / "logs"
    log_dir.mkdir(exist_ok=True)
    for old in log_dir.glob("*.json"):
        old.unlink()

    expected, records, edge_counts = [], [], {}
    for i, (name, tree, status, logs) in enumerate(CORPUS, start=1):
        h = tx_hash(i)
        # Every third trace uses upper-case hex to exercise normalization.
        doc = {"tx_hash": h, "trace": materialize(tree, upper=(i % 3 == 0))}
        (trace_dir / f"{i:02d}_{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
        cls = classify(tree)
        expected.append({"tx_hash": h, "name": name, **cls})
        edge_counts[name] = len(list(edges_of(tree)))
        if logs is not None:
            (log_dir / f"{i:02d}_{name}.json").write_text(json.dumps({
                "tx_hash": h,
                "logs": [log_entry(k, a, i) for k, a in logs],
            }, indent=2) + "\n")
        records.append({
            "tx_hash": h,
            "day": "2025-03-0%d" % (1 + i % 2),
            "block_number": 1000 + i,
            "tx_index": i % 4,
            "status": status,
            "from_address": tree["from"],
            "to_address": tree["to"],
            "gas_price": 1_000_000 + i,
            "priority_fee_per_gas": i % 3,
            "gas_used": 100_000 + 1_000 * i,
            "l1_fee": 5_000 * i,
            "chain": "unichain",
        })

    v3 = materialize(v3_swap_revert())
    (ROOT / "v3_swap_revert.json").write_text(json.dumps(
        {"tx_hash": tx_hash(1), "trace": v3}, indent=2) + "\n")

    (ROOT / "expected_classifications.json").write_text(json.dumps(expected, indent=2) + "\n")
    write_csv(ROOT / "records.csv", RECORD_HEADER, records)
    with open(ROOT / "labels.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER_LABELS)
        w.writerows(LABELS)

    # Breakdown over reverted swaps, k = 3.
    by_hash = {r["tx_hash"]: r for r in records}
    swaps = [(e, by_hash[e["tx_hash"]]) for e in expected
             if e["is_swap"] and by_hash[e["tx_hash"]]["status"] == "reverted"]
    total = len(swaps)

    def top(values):
        counts = Counter(values)
        rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:3]
        return [{"value": v, "count": c, "percent": 100.0 * c / total} for v, c in rows]

    breakdown = {
        "total_swaps": total,
        "dex": top(e["dex"] for e, _ in swaps),
        "pair": top(e["pair"] for e, _ in swaps),
        "sender": top(r["from_address"] for _, r in swaps),
    }
    (ROOT / "expected_breakdown.json").write_text(json.dumps(breakdown, indent=2) + "\n")
    return edge_counts


# Fee-statistics corpus -------------------------------------------------------

RECORD_HEADER = ["tx_hash", "day", "block_number", "tx_index", "status", "from_address",
                 "to_address", "gas_price", "priority_fee_per_gas", "gas_used", "l1_fee", "chain"]


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def stats_records():
    rng = random.Random(20250301)
    rows = []
    days = ["2025-03-01", "2025-03-02", "2025-03-03"]
    for i in range(100):
        chain = "base" if i % 2 == 0 else "unichain"
        day = days[(i // 2) % 3]
        # Unichain's sequencer tips are mostly exactly 1 wei.
        if chain == "unichain":
            fee = rng.choice([0, 1, 1, 1, 2, 1_000])
        else:
            fee = rng.choice([0, 0, 1, 50_000, 1_000_000, 3_000_000])
        gas_price = rng.choice([1_000_000, 2_000_000, 2_500_000])
        if i in (7, 42, 77):
            fee = gas_price + 123_456  # tip above the gas price
        gas_used = 0 if i in (13, 64) else rng.randint(21_000, 900_000)
        status = "reverted" if rng.random() < (0.45 if fee > 0 else 0.2) else "success"
        tx_index = rng.choice([0, 0, 0, 1, 1, 2, 3, 5, 8])
        rows.append({
            "tx_hash": "0x" + f"{0x5e:02x}" + f"{i:062x}",
            "day": day,
            "block_number": 5_000_000 + i // 3,
            "tx_index": tx_index,
            "status": status,
            "from_address": addr(0x90, 100 + i % 7),
            "to_address": addr(0x60, 100 + i % 5),
            "gas_price": gas_price,
            "priority_fee_per_gas": fee,
            "gas_used": gas_used,
            "l1_fee": rng.choice([0, 1_234, 98_765_432_100]),
            "chain": chain,
        })
    return rows


def write_stats():
    d = ROOT / "stats"
    d.mkdir(exist_ok=True)
    rows = stats_records()
    write_csv(d / "records.csv", RECORD_HEADER, rows)

    fee_rows = []
    for r in rows:
        g, p, u = r["gas_price"], r["priority_fee_per_gas"], r["gas_used"]
        execution = g * u
        fee_rows.append({
            "tx_hash": r["tx_hash"],
            "execution_fee": execution,
            "priority_fee": p * u,
            "base_fee": max(g - p, 0) * u,
            "l1_fee": r["l1_fee"],
            "total": execution + r["l1_fee"],
            "clamped": "true" if p > g else "false",
        })
    write_csv(d / "expected_fees.csv", list(fee_rows[0].keys()), fee_rows)

    def daily(subset):
        tally = defaultdict(lambda: [0, 0])
        for r in rows:
            if subset(r):
                t = tally[(r["chain"], r["day"])]
                t[0] += 1
                t[1] += r["status"] == "reverted"
        return {k: v for k, v in sorted(tally.items())}

    all_t = daily(lambda r: True)
    prio_t = daily(lambda r: r["priority_fee_per_gas"] > 0)

    def series(t):
        return [{"chain": c, "day": day, "total": n, "reverted": k, "revert_rate": k / n}
                for (c, day), (n, k) in t.items()]

    differential = []
    for key, (n, k) in prio_t.items():
        an, ak = all_t[key]
        differential.append({"chain": key[0], "day": key[1], "priority_rate": k / n,
                             "all_rate": ak / an, "differential": k / n - ak / an})

    reverted_positions = Counter(r["tx_index"] for r in rows if r["status"] == "reverted")
    all_positions = Counter(r["tx_index"] for r in rows)
    fees = sorted(r["priority_fee_per_gas"] for r in rows if r["status"] == "reverted")
    n = len(fees)
    quantiles = []
    for level in [0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0]:
        rank = min(max(math.ceil(level * n), 1), n)
        quantiles.append({"level": level, "value": fees[rank - 1]})

    expected = {
        "revert_all": series(all_t),
        "revert_priority": series(prio_t),
        "differential": differential,
        "position_reverted": {str(k): v for k, v in sorted(reverted_positions.items())},
        "position_all": {str(k): v for k, v in sorted(all_positions.items())},
        "priority_fee_summary": {
            "reverted_count": n,
            "zero_fee_share": fees.count(0) / n,
            "one_wei_share": fees.count(1) / n,
            "quantiles": quantiles,
        },
        "clamped_count": sum(1 for r in fee_rows if r["clamped"] == "true"),
    }
    (d / "expected_stats.json").write_text(json.dumps(expected, indent=2) + "\n")


# Bot-identification corpus ---------------------------------------------------


def write_bots():
    d = ROOT / "bots"
    d.mkdir(exist_ok=True)
    a = {k: "0x" + "a0" + f"{k:038x}" for k in range(1, 11)}
    # (label row or None, reverted count, success count)
    bot_rows = {
        1: (("other", "", "", "", "", "true"), 12, 3),       # all rules pass
        2: (("other", "", "", "", "binance", "true"), 30, 0),  # owner label
        3: (("router", "uniswap_v3", "", "", "", "true"), 20, 5),
        4: (("other", "", "", "", "", "false"), 15, 0),     # externally owned
        5: (("other", "", "", "", "", "true"), 4, 10),      # below min_count
        6: (("pool_v3", "uniswap_v3", "USDC-WETH", "500", "", "true"), 9, 40),
        7: (None, 20, 0),                                    # not in the library
        8: (("other", "", "", "", "", "true"), 5, 0),       # exactly min_count
        9: (("pool_manager_v4", "uniswap_v4", "", "", "", "true"), 50, 50),
        10: (("other", "", "", "", "", "true"), 7, 7),
    }
    min_count = 5
    labels, records, seq = [], [], 0
    for k, (lab, reverts, successes) in bot_rows.items():
        if lab is not None:
            shown = a[k].upper().replace("0X", "0x") if k % 2 == 0 else a[k]
            labels.append((shown,) + lab)
        for status, count in (("reverted", reverts), ("success", successes)):
            for _ in range(count):
                seq += 1
                records.append({
                    "tx_hash": "0x" + f"{0xb0:02x}" + f"{seq:062x}",
                    "day": "2025-03-0%d" % (1 + seq % 3),
                    "block_number": 7_000_000 + seq,
                    "tx_index": seq % 6,
                    "status": status,
                    "from_address": addr(0x90, 200 + seq % 4),
                    "to_address": a[k],
                    "gas_price": 1_000_000,
                    "priority_fee_per_gas": seq % 2,
                    "gas_used": 50_000,
                    "l1_fee": 10,
                    "chain": "base",
                })
    with open(d / "labels.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER_LABELS)
        w.writerows(labels)
    write_csv(d / "records.csv", RECORD_HEADER, records)

    label_map = {row[0].lower(): row for row in labels}
    flagged = []
    for k in bot_rows:
        addr_k = a[k]
        reverts = sum(1 for r in records if r["to_address"] == addr_k and r["status"] == "reverted")
        row = label_map.get(addr_k)
        if reverts < min_count or row is None:
            continue
        kind, owner, has_code = row[1], row[5], row[6]
        if kind in ("router", "pool_v2", "pool_v3", "pool_manager_v4"):
            continue
        if has_code != "true" or owner:
            continue
        flagged.append({"name": f"a{k}", "address": addr_k})
    (d / "expected_bots.json").write_text(json.dumps(
        {"min_count": min_count, "bots": flagged}, indent=2) + "\n")
    return [b["name"] for b in flagged]


if __name__ == "__main__":
    counts = write_corpus()
    write_stats()
    bots = write_bots()
    print("v3_swap_revert edges:", counts["v3_router_usdc_weth"])
    print("bots:", bots)
