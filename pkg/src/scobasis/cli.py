"""Command line front end emitting deterministic JSON reports.

Inputs are JSON files, detected by key: an object with "edges" is a
bidirected multigraph {"n", "edges", "family", "red"}, an object with
"sources" is a digraft {"sources", "sinks", "arcs", "tight_sources"},
general when a "family" key is present. Exit codes: 0 success, 2 for
instances with no solution, 1 for malformed input or usage errors.
"""

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import oracle
from .basis import digraft_basis
from .decompose import reduce_to_tight_sources, tight_dicut_decomposition
from .errors import Infeasible, NotCovered, ScobasisError
from .graphs import Digraft, GeneralDigraft, UndirectedMultigraph
from .instances import corpus_instances
from .orient import sco_basis, scr_basis
from .parity import ParityQuery, parity_sco
from .structure import classify

# corpus generation enumerates all small multigraphs, so its edge bound
# stays hard-capped regardless of the flag
_CORPUS_EDGE_LIMIT = 10


@dataclass(frozen=True)
class RunConfig:
    command: str
    path: str | None
    cap_arcs: int
    cap_edges: int
    seed: int
    out: str | None
    verify: bool
    target: str = "odd"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which this tool reserves
    # for infeasible instances
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="scobasis",
        description="integral bases of tight orientations and dijoins",
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, blurb: str, needs_input: bool = True, cap_edges: int = 16):
        q = sub.add_parser(name, help=blurb, description=blurb)
        if needs_input:
            q.add_argument("input", help="path to a JSON instance")
        q.add_argument(
            "--cap-arcs", type=int, default=24, help="dijoin enumeration cap"
        )
        q.add_argument(
            "--cap-edges",
            type=int,
            default=cap_edges,
            help="orientation enumeration cap",
        )
        q.add_argument("--seed", type=int, default=0, help="corpus seed")
        q.add_argument(
            "--verify",
            action="store_true",
            help="certify the output against brute-force enumeration",
        )
        q.add_argument("--out", default=None, help="write the report here")
        return q

    add("sco-basis", "integral basis of tight strongly connected orientations")
    add("scr-basis", "integral basis of strengthenings, edges given tail first")
    add("digraft-basis", "integral basis of tight dijoins")
    q = add("parity", "tight orientation with a red-arc parity target")
    q.add_argument("--target", choices=("odd", "even"), default="odd")
    add("decompose", "tight dicut decomposition into bricks and braces")
    add("classify", "brick, brace, or split witness of a plain digraft")
    add("enumerate", "brute-force tight orientations or dijoins")
    add("verify", "run the fast path and certify it against enumeration")
    add("corpus", "emit the deterministic instance corpus", needs_input=False,
        cap_edges=8)
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        path=getattr(args, "input", None),
        cap_arcs=args.cap_arcs,
        cap_edges=args.cap_edges,
        seed=args.seed,
        out=args.out,
        verify=args.verify,
        target=getattr(args, "target", "odd"),
    )


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("top-level JSON value must be an object")
    return data


def _family_from(data: dict) -> tuple:
    return tuple(frozenset(m) for m in data.get("family", ()))


def _digraft_from(data: dict):
    if data.get("family"):
        return GeneralDigraft.from_json(data)
    return Digraft.from_json(data)


def _emit(data: dict, out: str | None):
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _error_report(exc: BaseException) -> dict:
    rep = {"error": str(exc) or type(exc).__name__, "type": type(exc).__name__}
    viol = getattr(exc, "violator", None)
    if viol is not None:
        rep["violator"] = viol.to_json() if hasattr(viol, "to_json") else viol
    return rep


def _cmd_sco_basis(cfg: RunConfig, data: dict) -> dict:
    g = UndirectedMultigraph.from_json(data)
    return sco_basis(g, _family_from(data), verify=cfg.verify).to_json()


def _cmd_scr_basis(cfg: RunConfig, data: dict) -> dict:
    arcs = tuple(tuple(a) for a in data["edges"])
    rep = scr_basis(int(data["n"]), arcs, _family_from(data), verify=cfg.verify)
    return rep.to_json()


def _cmd_digraft_basis(cfg: RunConfig, data: dict) -> dict:
    return digraft_basis(_digraft_from(data), verify=cfg.verify).to_json()


def _cmd_parity(cfg: RunConfig, data: dict) -> dict:
    q = ParityQuery(
        graph=UndirectedMultigraph.from_json(data),
        family=_family_from(data),
        red=frozenset(data.get("red", ())),
        target=cfg.target,
    )
    found = parity_sco(q)
    return {
        "target": cfg.target,
        "red": sorted(q.red),
        "solution": None if found is None else sorted(found),
    }


def _cmd_decompose(cfg: RunConfig, data: dict) -> dict:
    d = _digraft_from(data)
    if isinstance(d, GeneralDigraft):
        return reduce_to_tight_sources(d).to_json()
    return tight_dicut_decomposition(d).to_json()


def _cmd_classify(cfg: RunConfig, data: dict) -> dict:
    d = _digraft_from(data)
    if isinstance(d, GeneralDigraft):
        raise ValueError("classify expects a plain digraft without a family")
    return classify(d).to_json()


def _cmd_enumerate(cfg: RunConfig, data: dict) -> dict:
    if "edges" in data:
        g = UndirectedMultigraph.from_json(data)
        sets = oracle.enumerate_tight_scos(
            g, _family_from(data), cap=cfg.cap_edges
        )
    elif "sources" in data:
        sets = oracle.enumerate_tight_dijoins(
            _digraft_from(data), cap=cfg.cap_arcs
        )
    else:
        raise ValueError('instance needs an "edges" or "sources" key')
    return {"count": len(sets), "sets": [sorted(s) for s in sets]}


def _cmd_verify(cfg: RunConfig, data: dict) -> dict:
    """Fast-path basis certified against full enumeration, caps applied."""
    if "edges" in data:
        g = UndirectedMultigraph.from_json(data)
        fam = _family_from(data)
        rep = sco_basis(g, fam)
        enumerated = oracle.enumerate_tight_scos(g, fam, cap=cfg.cap_edges)
        n_arcs = 2 * len(g.edges)
    elif "sources" in data:
        d = _digraft_from(data)
        rep = digraft_basis(d)
        enumerated = oracle.enumerate_tight_dijoins(d, cap=cfg.cap_arcs)
        n_arcs = len(d.arcs)
    else:
        raise ValueError('instance needs an "edges" or "sources" key')
    cert = oracle.verify_integral_basis(rep.basis, enumerated, n_arcs)
    return {
        "certified": cert.ok,
        "basis": [sorted(j) for j in rep.basis],
        "certificate": cert.to_json(),
    }


def _cmd_corpus(cfg: RunConfig) -> dict:
    outdir = Path(cfg.out or "corpus")
    outdir.mkdir(parents=True, exist_ok=True)
    max_m = min(cfg.cap_edges, _CORPUS_EDGE_LIMIT)
    manifest = {}
    for name, g, fam in corpus_instances(max_m=max_m, seed=cfg.seed):
        body = {
            "n": g.n,
            "edges": [list(e) for e in g.edges],
            "family": [sorted(m) for m in fam],
            "red": [],
        }
        text = json.dumps(body, sort_keys=True, indent=2) + "\n"
        (outdir / f"{name}.json").write_text(text, encoding="utf-8")
        manifest[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()
    report = {"seed": cfg.seed, "count": len(manifest), "instances": manifest}
    (outdir / "manifest.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return report


_COMMANDS = {
    "sco-basis": _cmd_sco_basis,
    "scr-basis": _cmd_scr_basis,
    "digraft-basis": _cmd_digraft_basis,
    "parity": _cmd_parity,
    "decompose": _cmd_decompose,
    "classify": _cmd_classify,
    "enumerate": _cmd_enumerate,
    "verify": _cmd_verify,
}


def run(argv=None) -> int:
    cfg = _config(_build_parser().parse_args(argv))
    # corpus treats --out as a directory and writes its own manifest
    out = None if cfg.command == "corpus" else cfg.out
    try:
        if cfg.command == "corpus":
            report = _cmd_corpus(cfg)
        else:
            report = _COMMANDS[cfg.command](cfg, _load(cfg.path))
    except (Infeasible, NotCovered) as exc:
        _emit(_error_report(exc), out)
        return 2
    except ScobasisError as exc:
        _emit(_error_report(exc), out)
        return 1
    except (OSError, ValueError, KeyError, TypeError) as exc:
        _emit(_error_report(exc), out)
        return 1
    _emit(report, out)
    return 0


def main(argv=None) -> int:
    return run(argv)
