"""Construction plans: structure cost, disassembly by reversal, JSON file format."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .assembly import DEFAULT_BOUNDS, Assembly, Bounds, BrickPlacement, build
from .catalog import DEFAULT_CATALOG, PALETTE, BrickCatalog

ASSEMBLE = "assemble"
DISASSEMBLE = "disassemble"

PLAN_VERSION = 1


class PlanFormatError(ValueError):
    """A plan document is malformed; the message carries field/line context."""


@dataclass(frozen=True)
class Task:
    step: int
    action: str
    placement: BrickPlacement


@dataclass(frozen=True)
class ConstructionPlan:
    """Ordered task list over one workspace, replayable and reversible."""

    tasks: tuple[Task, ...]
    bounds: Bounds = DEFAULT_BOUNDS

    def __post_init__(self) -> None:
        for i, t in enumerate(self.tasks, start=1):
            if t.step != i:
                raise PlanFormatError(f"steps must be contiguous from 1: expected step {i}, got {t.step}")
            if t.action not in (ASSEMBLE, DISASSEMBLE):
                raise PlanFormatError(f"step {t.step}: unknown action {t.action!r}")

    def actions(self) -> set[str]:
        return {t.action for t in self.tasks}

    def placements(self) -> tuple[BrickPlacement, ...]:
        return tuple(t.placement for t in self.tasks)


def assembly_plan(placements, bounds: Bounds = DEFAULT_BOUNDS) -> ConstructionPlan:
    tasks = tuple(Task(i, ASSEMBLE, b) for i, b in enumerate(placements, start=1))
    return ConstructionPlan(tasks, bounds)


@dataclass(frozen=True)
class StructureCost:
    """Difference between two structures as mismatch counts.

    ``total`` is the symmetric-difference cardinality of the two placement
    sets, zero exactly when the structures are identical. The per-brick
    decomposition assigns greedily matched pairs to position / brick-type /
    orientation mismatch counts; color mismatches are reported separately
    since color rides along with each placement rather than entering the
    per-brick optimization.
    """

    total: int
    position: int
    brick_type: int
    orientation: int
    color: int


def structure_cost(target: Assembly, built: Assembly) -> StructureCost:
    if target.bounds != built.bounds:
        raise ValueError(f"bound mismatch: {target.bounds} vs {built.bounds}")

    t_set = set(target.placements)
    b_set = set(built.placements)
    only_t = sorted(t_set - b_set, key=BrickPlacement.sort_key)
    only_b = sorted(b_set - t_set, key=BrickPlacement.sort_key)
    total = len(only_t) + len(only_b)

    # Greedy matching, position first: placements at the same anchor pair up,
    # the rest pair in canonical order and count as position mismatches.
    by_pos_b = {b.p: b for b in only_b}
    l_p = l_i = l_w = l_c = 0
    rest_t: list[BrickPlacement] = []
    matched_b: set[BrickPlacement] = set()
    for t in only_t:
        other = by_pos_b.get(t.p)
        if other is not None and other not in matched_b:
            matched_b.add(other)
            l_i += t.brick_id != other.brick_id
            l_w += t.omega != other.omega
            l_c += t.color != other.color
        else:
            rest_t.append(t)
    rest_b = [b for b in only_b if b not in matched_b]
    for t, b in zip(rest_t, rest_b):
        l_p += 1
        l_i += t.brick_id != b.brick_id
        l_w += t.omega != b.omega
        l_c += t.color != b.color
    # Unpairable leftovers are bricks present on one side only.
    l_p += abs(len(rest_t) - len(rest_b))

    return StructureCost(total=total, position=l_p, brick_type=l_i, orientation=l_w, color=l_c)


def reverse_plan(plan: ConstructionPlan) -> ConstructionPlan:
    """Reverse an assembly plan into a disassembly plan (and back).

    Reversing twice restores the original order, so a pure disassembly plan
    reverses back into its assembly plan. Mixed-action plans are rejected.
    """
    actions = plan.actions()
    if actions <= {ASSEMBLE}:
        flipped = DISASSEMBLE
    elif actions == {DISASSEMBLE}:
        flipped = ASSEMBLE
    else:
        raise PlanFormatError("plan already contains disassemble actions mixed with assemble ones")
    tasks = tuple(
        Task(i, flipped, t.placement)
        for i, t in enumerate(reversed(plan.tasks), start=1)
    )
    return ConstructionPlan(tasks, plan.bounds)


def replay(
    plan: ConstructionPlan,
    base: Assembly | None = None,
    catalog: BrickCatalog = DEFAULT_CATALOG,
) -> Assembly:
    """Execute a plan: assemble onto ``base`` (default empty), or disassemble
    from ``base`` (required for disassembly plans)."""
    actions = plan.actions()
    if actions == {DISASSEMBLE}:
        if base is None:
            raise ValueError("disassembly replay needs the assembled starting state")
        asm = base
        for t in plan.tasks:
            asm = asm.remove_last(expected=t.placement)
        return asm
    asm = base if base is not None else Assembly.empty(plan.bounds, catalog)
    for t in plan.tasks:
        asm = asm.apply(t.placement)
    return asm


# -- file format ------------------------------------------------------------
#
# UTF-8 JSON, keys in a fixed order so serialization is byte-deterministic:
# {"version": 1, "bounds": [X, Y, Z],
#  "tasks": [{"step": 1, "action": "assemble", "brick": "2x4",
#             "omega": 0, "position": [x, y, z], "color": "red"}, ...]}


def task_to_json(t: Task, catalog: BrickCatalog = DEFAULT_CATALOG) -> dict:
    return {
        "step": t.step,
        "action": t.action,
        "brick": catalog.get(t.placement.brick_id).name,
        "omega": t.placement.omega,
        "position": list(t.placement.p),
        "color": t.placement.color,
    }


def serialize(plan: ConstructionPlan, catalog: BrickCatalog = DEFAULT_CATALOG) -> bytes:
    doc = {
        "version": PLAN_VERSION,
        "bounds": list(plan.bounds),
        "tasks": [task_to_json(t, catalog) for t in plan.tasks],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise PlanFormatError(f"{where}: missing field {key!r}")
    return doc[key]


def parse_placement(obj: dict, where: str, catalog: BrickCatalog) -> BrickPlacement:
    if not isinstance(obj, dict):
        raise PlanFormatError(f"{where}: expected an object, got {type(obj).__name__}")
    name = _require(obj, "brick", where)
    try:
        bt = catalog.by_name(str(name))
    except ValueError as e:
        raise PlanFormatError(f"{where}: {e}") from None
    omega = _require(obj, "omega", where)
    if omega not in (0, 1):
        raise PlanFormatError(f"{where}: omega must be 0 or 1, got {omega!r}")
    pos = _require(obj, "position", where)
    if not (isinstance(pos, list) and len(pos) == 3 and all(isinstance(v, int) for v in pos)):
        raise PlanFormatError(f"{where}: position must be [x, y, z] integers, got {pos!r}")
    color = _require(obj, "color", where)
    if color not in PALETTE:
        raise PlanFormatError(f"{where}: unknown color {color!r}")
    return BrickPlacement(p=(pos[0], pos[1], pos[2]), brick_id=bt.id, omega=int(omega), color=str(color))


def parse(
    data: bytes | str,
    catalog: BrickCatalog = DEFAULT_CATALOG,
    validate: bool = True,
) -> ConstructionPlan:
    """Parse and validate a plan document.

    Assembly plans are replayed through the feasibility check, so a plan
    with, e.g., a floating brick raises InfeasiblePlacement naming the cells.
    Disassembly plans are validated by checking that their reversal replays.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise PlanFormatError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise PlanFormatError("top-level document must be an object")
    version = _require(doc, "version", "document")
    if version != PLAN_VERSION:
        raise PlanFormatError(f"unsupported plan version {version!r}")
    raw_bounds = _require(doc, "bounds", "document")
    if not (isinstance(raw_bounds, list) and len(raw_bounds) == 3 and all(isinstance(v, int) for v in raw_bounds)):
        raise PlanFormatError(f"bounds must be [X, Y, Z] integers, got {raw_bounds!r}")
    bounds = (raw_bounds[0], raw_bounds[1], raw_bounds[2])
    raw_tasks = _require(doc, "tasks", "document")
    if not isinstance(raw_tasks, list):
        raise PlanFormatError("tasks must be a list")

    tasks = []
    for i, obj in enumerate(raw_tasks, start=1):
        where = f"task {i}"
        if not isinstance(obj, dict):
            raise PlanFormatError(f"{where}: expected an object, got {type(obj).__name__}")
        step = _require(obj, "step", where)
        if step != i:
            raise PlanFormatError(f"{where}: steps must be contiguous from 1; expected step {i}, found {step!r}")
        action = _require(obj, "action", where)
        if action not in (ASSEMBLE, DISASSEMBLE):
            raise PlanFormatError(f"{where}: unknown action {action!r}")
        tasks.append(Task(step=i, action=action, placement=parse_placement(obj, where, catalog)))

    plan = ConstructionPlan(tuple(tasks), bounds)
    actions = plan.actions()
    if len(actions) > 1:
        raise PlanFormatError("plan mixes assemble and disassemble actions")
    if validate and tasks:
        if actions == {ASSEMBLE}:
            replay(plan, catalog=catalog)  # propagates InfeasiblePlacement
        else:
            start = build(reverse_plan(plan).placements(), bounds, catalog)
            replay(plan, base=start, catalog=catalog)
    return plan
