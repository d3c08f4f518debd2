#!/usr/bin/env python3
"""Generates the bundled puzzle documents and reference solutions.

Run from the repository root:

    python3 tools/make_puzzles.py && build/nodehack fmt puzzles/*.json puzzles/solutions/*.json

The generated files are committed; this script is the readable source for them.
"""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "puzzles"

# ---------------------------------------------------------------------------
# Document helpers


def val(t, v=None):
    return {"type": t} if t == "Pulse" else {"type": t, "value": v}


def num(v):
    return val("Number", float(v))


def text(v):
    return val("Text", v)


def boolean(v):
    return val("Boolean", v)


def color(v):
    return val("Color", v)


def node(nid, kind, params=None, pos=(0, 0), locked=True):
    return {"id": nid, "kind": kind, "params": params or {}, "position": [float(pos[0]), float(pos[1])], "locked": locked}


def const(nid, value, pos=(0, 0), locked=False):
    return node(nid, "Constant", {"value": value}, pos, locked)


def entity(nid, ent, pos=(0, 0)):
    return node(nid, "Entity", {"entity": ent}, pos)


def tube(frm, to):
    return {"from": frm.split("."), "to": to.split(".")}


def grid(width, height, lava=(), markers=()):
    return {
        "width": width,
        "height": height,
        "lava": [[c, r] for c, r in lava],
        "markers": [{"cell": [c, r], "number": n, "color": col} for (c, r), n, col in markers],
    }


def world(g, entities, classes=(), instances=()):
    return {"tick": 0, "grid": g, "entities": list(entities), "classes": list(classes), "instances": list(instances)}


def door(eid, cell=None, is_open=False):
    return {"id": eid, "type": "Door", "cell": cell, "open": is_open}


def button(eid, cell=None):
    return {"id": eid, "type": "Button", "cell": cell, "held": False, "pressed": False}


def robot(eid, cell, heading="E", command="forward", movement="wheels", body="standard", carrying=None, instance=None):
    return {
        "id": eid,
        "type": "Robot",
        "cell": list(cell),
        "heading": heading,
        "movement_type": movement,
        "body_type": body,
        "command": command,
        "carrying": carrying,
        "alive": True,
        "instance": instance,
    }


def robot_class(cid="Robot", ctor=("movement_type",), body="standard", parent=None, methods=True, fields=True):
    types = {"movement_type": "Text", "body_type": "Text"}
    return {
        "id": cid,
        "name": cid,
        "parent": parent,
        "fields": [
            {"name": "movement_type", "type": "Text", "default": text("wheels")},
            {"name": "body_type", "type": "Text", "default": text(body)},
        ]
        if fields
        else [],
        "constructor_params": [{"name": p, "type": types[p]} for p in ctor],
        "methods": [
            {
                "name": "next_heading",
                "params": [{"name": "color", "type": "Color"}],
                "results": [{"name": "heading", "type": "Text"}],
                "impl": "heading_from_color",
            }
        ]
        if methods
        else [],
    }


def instance(iid, cls, entity_id, local=None):
    return {"id": iid, "class": cls, "local_fields": local or {}, "bound_entity": entity_id}


def prop(e, p):
    return {"prop": [e, p]}


def lit(v):
    return {"lit": v}


def eq(a, b):
    return {"eq": [a, b]}


def puzzle(pid, title, prose, w, nodes, tubes, palette, allowed, win, fail=None, script=(), tick_limit=200):
    return {
        "format_version": 1,
        "id": pid,
        "title": title,
        "prose": prose,
        "world": w,
        "template": {"nodes": nodes, "tubes": tubes},
        "palette": palette,
        "allowed_edits": allowed,
        "script": list(script),
        "win": win,
        "fail": fail,
        "tick_limit": tick_limit,
    }


def connect(frm, to):
    return {"op": "connect", "args": {"from": frm.split("."), "to": to.split(".")}}


def disconnect(to):
    return {"op": "disconnect", "args": {"to": to.split(".")}}


def set_constant(nid, value):
    return {"op": "set_constant", "args": {"node": nid, "value": value}}


WIRE = ["connect", "disconnect"]

# ---------------------------------------------------------------------------
# Puzzles 1-3: values flowing into entities


def p1():
    w = world(grid(3, 1), [door("door1", [2, 0])])
    return puzzle(
        1,
        "Open the door",
        "A door opens when a true Boolean reaches its open input.",
        w,
        [entity("door", "door1", (400, 0))],
        [],
        [const("true", boolean(True), (0, 0)), const("false", boolean(False), (0, 120))],
        WIRE,
        eq(prop("door1", "open"), lit(boolean(True))),
    ), [connect("true.out", "door.open")]


def p2():
    w = world(
        grid(2, 1),
        [
            {"id": "lift1", "type": "Elevator", "height": 0.0, "min": 0.0, "max": 6.0, "target": 0.0, "speed": 1.0},
            {"id": "player", "type": "Avatar", "cell": [0, 0], "riding": "lift1"},
        ],
    )
    return puzzle(
        2,
        "Raise the elevator",
        "A Number sets how high the elevator travels; the next floor is 4 units up.",
        w,
        [entity("lift", "lift1", (400, 0))],
        [],
        [const("height", num(2), (0, 0))],
        ["connect", "disconnect", "set_constant"],
        {"and": [{"near": [prop("lift1", "height"), lit(num(4)), 1e-9]}, {"riding": ["player", "lift1"]}]},
    ), [set_constant("height", num(4)), connect("height.out", "lift.target")]


def p3():
    # Each digit of the password is a one-step arithmetic result: 3+4, 9-7, 5*1, 8/2.
    w = world(
        grid(1, 1),
        [{"id": "console1", "type": "PasswordConsole", "expected": "7254", "entered": "", "unlocked": False, "digits": [None] * 4}],
    )
    nodes, tubes = [entity("console", "console1", (600, 150))], []
    ops = [("add", 3, 0), ("sub", 9, 0), ("mul", 5, 0), ("div", 8, 1)]
    for i, (op, fixed, start) in enumerate(ops, 1):
        y = (i - 1) * 120
        nodes += [
            node(f"{op}{i}", "Arithmetic", {"op": op}, (300, y)),
            const(f"k{i}", num(fixed), (0, y), locked=True),
            const(f"x{i}", num(start), (0, y + 50)),
        ]
        tubes += [tube(f"k{i}.out", f"{op}{i}.a"), tube(f"x{i}.out", f"{op}{i}.b"), tube(f"{op}{i}.out", f"console.d{i}")]
    solution = [set_constant(f"x{i}", num(v)) for i, v in enumerate([4, 7, 1, 2], 1)]
    return puzzle(
        3,
        "Crack the password",
        "Each digit of the password is the result of one arithmetic node.",
        w,
        nodes,
        tubes,
        [],
        ["set_constant"],
        eq(prop("console1", "unlocked"), lit(boolean(True))),
    ), solution


# ---------------------------------------------------------------------------
# Puzzles 4-7: the door must follow a logic function of buttons


def logic_puzzle(pid, title, prose, buttons, expr, palette, solution, script, end_tick):
    ents = [button(b) for b in buttons] + [door("door1")]
    nodes = [entity(b, b, (0, i * 120)) for i, b in enumerate(buttons)] + [entity("door", "door1", (600, 60))]
    w = world(grid(1, 1), ents)
    return puzzle(
        pid,
        title,
        prose,
        w,
        nodes,
        [],
        palette,
        WIRE,
        {"tick_at_least": end_tick},
        fail={"neq": [prop("door1", "open"), expr]},
        script=script,
    ), solution


def press(t, b):
    return {"tick": t, "action": "press", "button": b}


def release(t, b):
    return {"tick": t, "action": "release", "button": b}


TWO_BUTTON_SCRIPT = [press(2, "A"), press(4, "B"), release(6, "A"), release(8, "B"), press(10, "B")]


def gates(*names):
    return [node(n, "Not" if n == "not" else "Logical", {} if n == "not" else {"op": n}, (300, i * 120), locked=False)
            for i, n in enumerate(names)]


def p4():
    a, b = prop("A", "pressed"), prop("B", "pressed")
    return logic_puzzle(
        4, "Both buttons", "The door opens only while both buttons are pressed.", ["A", "B"], {"and": [a, b]},
        gates("and", "or"), [connect("A.pressed", "and.a"), connect("B.pressed", "and.b"), connect("and.out", "door.open")],
        TWO_BUTTON_SCRIPT, 12)


def p5():
    a, b = prop("A", "pressed"), prop("B", "pressed")
    return logic_puzzle(
        5, "Either button", "The door opens while at least one button is pressed.", ["A", "B"], {"or": [a, b]},
        gates("and", "or"), [connect("A.pressed", "or.a"), connect("B.pressed", "or.b"), connect("or.out", "door.open")],
        TWO_BUTTON_SCRIPT, 12)


def p6():
    a, b = prop("A", "pressed"), prop("B", "pressed")
    return logic_puzzle(
        6, "One but not the other", "The door opens while A is pressed and B is not.", ["A", "B"],
        {"and": [a, {"not": b}]}, gates("and", "or", "not"),
        [connect("A.pressed", "and.a"), connect("B.pressed", "not.in"), connect("not.out", "and.b"),
         connect("and.out", "door.open")],
        TWO_BUTTON_SCRIPT, 12)


def p7():
    a, b, c = prop("A", "pressed"), prop("B", "pressed"), prop("C", "pressed")
    script = [press(2, "A"), press(4, "B"), release(6, "A"), press(8, "C"), release(10, "B"), release(12, "C")]
    return logic_puzzle(
        7, "Mixed gates", "The door opens while A and B are both pressed, or while C is pressed.", ["A", "B", "C"],
        {"or": [{"and": [a, b]}, c]}, gates("and", "or", "not"),
        [connect("A.pressed", "and.a"), connect("B.pressed", "and.b"), connect("and.out", "or.a"),
         connect("C.pressed", "or.b"), connect("or.out", "door.open")],
        script, 14)


# ---------------------------------------------------------------------------
# Puzzles 8-10: events and branching


MARKER_COLORS = ["red", "green", "blue", "yellow"]


def p8():
    w = world(
        grid(6, 1, markers=[((c, 0), c, MARKER_COLORS[c - 1]) for c in range(1, 5)]),
        [robot("bot1", (0, 0), carrying="cube1"), {"id": "cube1", "type": "Cube", "cell": None, "carried_by": "bot1"}],
    )
    nodes = [
        entity("bot", "bot1", (600, 0)),
        node("on_column", "EventHandler", {"event": "OnEnterColumn", "entity": "bot1"}, (0, 0)),
    ]
    palette = [node("same", "Compare", {"op": "eq"}, (300, 0), locked=False)] + [
        const(name, num(v), (0, 150 + 60 * i)) for i, (name, v) in enumerate([("one", 1), ("two", 2), ("three", 3), ("four", 4)])
    ]
    return puzzle(
        8,
        "Drop on three",
        "The robot must drop its cube on marker 3 and nowhere else.",
        w,
        nodes,
        [],
        palette,
        WIRE,
        {"and": [{"cube_on_marker": 3}, {"no_cube_on_markers": [1, 2, 4]}]},
    ), [connect("on_column.column", "same.a"), connect("three.out", "same.b"), connect("same.out", "bot.drop")]


def lava_except(width, height, path):
    keep = set(path)
    return [(c, r) for r in range(height) for c in range(width) if (c, r) not in keep]


def color_chain(prefix_locked=True):
    """Handler plus red/green/blue tests feeding a three-level Conditional chain."""
    nodes = [node("on_column", "EventHandler", {"event": "OnEnterColumn", "entity": "bot1"}, (0, 0))]
    tubes = []
    for i, c in enumerate(["red", "green", "blue"]):
        nodes += [
            const(c, color(c), (0, 150 + 120 * i), locked=True),
            node(f"is_{c}", "Compare", {"op": "eq"}, (250, 150 + 120 * i)),
        ]
        tubes += [tube("on_column.color", f"is_{c}.a"), tube(f"{c}.out", f"is_{c}.b")]
    for i, c in enumerate(["red", "green", "blue"], 1):
        nodes.append(node(f"pick{i}", "Conditional", {}, (700 - 120 * i, 150 + 120 * (i - 1)), locked=prefix_locked or i > 1))
        tubes.append(tube(f"is_{c}.out", f"pick{i}.cond"))
    tubes += [tube("pick2.out", "pick1.else"), tube("pick3.out", "pick2.else")]
    for i, h in enumerate(["N", "E", "S", "W"]):
        nodes.append(const(f"go_{h}", text(h), (450, 550 + 50 * i)))
    return nodes, tubes


CORRECT_HEADINGS = [("go_N", "pick1.then"), ("go_E", "pick2.then"), ("go_S", "pick3.then"), ("go_W", "pick3.else")]


def p9():
    path = [(0, 4), (1, 4), (2, 4), (3, 4), (3, 3), (3, 2), (3, 1), (4, 1), (5, 1), (6, 1), (6, 2), (6, 3), (5, 3)]
    markers = [((3, 4), 1, "red"), ((3, 1), 2, "green"), ((6, 1), 3, "blue"), ((6, 3), 4, "yellow")]
    w = world(grid(7, 6, lava_except(7, 6, path), markers), [robot("bot1", (0, 4))])
    nodes, tubes = color_chain()
    nodes.append(entity("bot", "bot1", (900, 150)))
    tubes.append(tube("pick1.out", "bot.heading"))
    scrambled = [("go_E", "pick1.then"), ("go_S", "pick2.then"), ("go_W", "pick3.then"), ("go_N", "pick3.else")]
    tubes += [tube(f"{c}.out", to) for c, to in scrambled]
    solution = [disconnect(to) for _, to in scrambled] + [connect(f"{c}.out", to) for c, to in CORRECT_HEADINGS]
    return puzzle(
        9,
        "Follow the colors",
        "Markers tell the robot where to turn: red north, green east, blue south, yellow west.",
        w,
        nodes,
        tubes,
        [],
        WIRE,
        {"robot_at": ["bot1", 5, 3]},
    ), solution


def p10():
    path = [(0, 3), (1, 3), (2, 3), (3, 3), (3, 2), (3, 1), (4, 1), (5, 1)]
    markers = [((1, 3), 1, "red"), ((3, 3), 4, "red"), ((3, 2), 2, "green"), ((3, 1), 3, "green"), ((4, 1), 2, "blue")]
    w = world(grid(6, 5, lava_except(6, 5, path), markers), [robot("bot1", (0, 3))])
    nodes, tubes = color_chain(prefix_locked=False)
    nodes.append(entity("bot", "bot1", (1100, 150)))
    tubes += [tube(f"{c}.out", to) for c, to in CORRECT_HEADINGS] + [tube("pick1.out", "bot.heading")]
    palette = [
        node("at_least", "Compare", {"op": "geq"}, (700, 0), locked=False),
        const("three", num(3), (450, 0)),
        node("gate", "Conditional", {}, (900, 0), locked=False),
    ]
    solution = [
        disconnect("bot.heading"),
        connect("on_column.column", "at_least.a"),
        connect("three.out", "at_least.b"),
        connect("at_least.out", "gate.cond"),
        connect("pick1.out", "gate.then"),
        connect("bot.heading", "gate.else"),
        connect("gate.out", "bot.heading"),
    ]
    return puzzle(
        10,
        "Only the real markers",
        "Markers numbered below 3 are decoys; the robot should keep its heading on them.",
        w,
        nodes,
        tubes,
        palette,
        WIRE,
        {"robot_at": ["bot1", 5, 1]},
    ), solution


# ---------------------------------------------------------------------------
# Puzzles 11-13: constructors


def p11():
    w = world(grid(6, 1, lava=[(2, 0), (3, 0)]), [robot("bot1", (0, 0))], [robot_class()])
    nodes = [
        node("build", "ConstructorCall", {"class": "Robot"}, (300, 0)),
        const("wheels", text("wheels"), (0, 0)),
        entity("bot", "bot1", (600, 0)),
    ]
    tubes = [tube("wheels.out", "build.movement_type"), tube("build.out", "bot.blueprint")]
    return puzzle(
        11,
        "Hover over lava",
        "A constructor builds the robot's blueprint; hover robots cross lava unharmed.",
        w,
        nodes,
        tubes,
        [const("hover", text("hover"), (0, 120)), const("legs", text("legs"), (0, 180))],
        WIRE,
        {"robot_at": ["bot1", 5, 0]},
    ), [disconnect("build.movement_type"), connect("hover.out", "build.movement_type")]


TYPE_PALETTE = ["wheels", "legs", "hover", "standard", "heavy", "slim"]


def type_constants(skip=()):
    return [const(t, text(t), (0, 60 * i)) for i, t in enumerate(TYPE_PALETTE) if t not in skip]


def plate_lane(row, suffix=""):
    """Plate at column 2 holds the door at column 3 open."""
    ents = [button(f"plate{suffix}", [2, row]), door(f"gate{suffix}", [3, row])]
    nodes = [entity(f"plate{suffix}", f"plate{suffix}", (300, 400 + 150 * row)),
             entity(f"gate{suffix}", f"gate{suffix}", (600, 400 + 150 * row))]
    tubes = [tube(f"plate{suffix}.pressed", f"gate{suffix}.open")]
    return ents, nodes, tubes


def p12():
    ents, lane_nodes, lane_tubes = plate_lane(0)
    w = world(grid(6, 1), [robot("bot1", (0, 0))] + ents, [robot_class(ctor=("movement_type", "body_type"))])
    nodes = [node("build", "ConstructorCall", {"class": "Robot"}, (300, 0)), entity("bot", "bot1", (600, 0))] + type_constants()
    tubes = [tube("hover.out", "build.movement_type"), tube("slim.out", "build.body_type"), tube("build.out", "bot.blueprint")]
    solution = [
        disconnect("build.movement_type"),
        disconnect("build.body_type"),
        connect("wheels.out", "build.movement_type"),
        connect("heavy.out", "build.body_type"),
    ]
    return puzzle(
        12,
        "Heavy enough",
        "The plate only holds the door open under a heavy robot that touches the ground.",
        w,
        nodes + lane_nodes,
        tubes + lane_tubes,
        [],
        WIRE,
        {"robot_at": ["bot1", 5, 0]},
    ), solution


def p13():
    ents, lane_nodes, lane_tubes = plate_lane(1)
    robots = [robot(f"bot{i}", (0, i - 1)) for i in (1, 2, 3)]
    w = world(grid(6, 3, lava=[(2, 0), (3, 0)]), robots + ents, [robot_class(ctor=("movement_type", "body_type"))])
    nodes, tubes = type_constants(), []
    for i in (1, 2, 3):
        nodes += [node(f"build{i}", "ConstructorCall", {"class": "Robot"}, (300, 150 * (i - 1))),
                  entity(f"bot{i}", f"bot{i}", (600, 150 * (i - 1)))]
        tubes += [tube("wheels.out", f"build{i}.movement_type"), tube("standard.out", f"build{i}.body_type"),
                  tube(f"build{i}.out", f"bot{i}.blueprint")]
    solution = [
        disconnect("build1.movement_type"),
        disconnect("build1.body_type"),
        disconnect("build2.body_type"),
        disconnect("build3.movement_type"),
        connect("hover.out", "build1.movement_type"),
        connect("slim.out", "build1.body_type"),
        connect("heavy.out", "build2.body_type"),
        connect("legs.out", "build3.movement_type"),
    ]
    win = {"and": [
        {"robot_at": ["bot1", 5, 0]},
        {"robot_at": ["bot2", 5, 1]},
        {"robot_at": ["bot3", 5, 2]},
        eq(prop("bot1", "body_type"), lit(text("slim"))),
        eq(prop("bot3", "movement_type"), lit(text("legs"))),
    ]}
    return puzzle(
        13,
        "Three lanes",
        "Build three robots: a slim hover robot for the lava, a heavy one for the plate, and one on legs.",
        w,
        nodes + lane_nodes,
        tubes + lane_tubes,
        [],
        WIRE,
        win,
    ), solution


# ---------------------------------------------------------------------------
# Puzzles 14-17: classes


def fleet(rows, cls="Robot", local=None):
    robots, insts = [], []
    for i, r in enumerate(rows, 1):
        robots.append(robot(f"bot{i}", (0, r), instance=f"obj{i}"))
        insts.append(instance(f"obj{i}", cls if isinstance(cls, str) else cls[i - 1], f"bot{i}", (local or {}).get(i)))
    return robots, insts


def at_goal(n, col=3):
    return [{"robot_at": [f"bot{i}", col, i - 1]} for i in range(1, n + 1)]


def p14():
    robots, insts = fleet(range(4))
    w = world(grid(4, 4, lava=[(1, r) for r in range(4)]), robots, [robot_class()], insts)
    return puzzle(
        14,
        "Change the class",
        "Four robots share a class; changing the class default changes every one of them.",
        w,
        [node("robots", "ClassNode", {"class": "Robot"}, (400, 0))],
        [],
        [const("hover", text("hover"), (0, 0)), const("legs", text("legs"), (0, 60))],
        WIRE,
        {"and": [{"all_instances": ["Robot", "movement_type", text("hover")]}] + at_goal(4)},
    ), [connect("hover.out", "robots.movement_type")]


def p15():
    robots, insts = fleet(range(4), local={3: {"movement_type": text("wheels")}})
    w = world(grid(4, 4, lava=[(1, r) for r in range(4)]), robots, [robot_class()], insts)
    nodes = [node("robots", "ClassNode", {"class": "Robot"}, (400, 0)), entity("bot3", "bot3", (700, 200))]
    palette = [
        const("hover", text("hover"), (0, 0)),
        const("legs", text("legs"), (0, 60)),
        node("build", "ConstructorCall", {"class": "Robot"}, (400, 200), locked=False),
    ]
    solution = [connect("hover.out", "robots.movement_type"), connect("hover.out", "build.movement_type"),
                connect("build.out", "bot3.blueprint")]
    return puzzle(
        15,
        "The stubborn robot",
        "One robot set its own movement type, so the class default no longer reaches it.",
        w,
        nodes,
        [],
        palette,
        WIRE,
        {"and": at_goal(4)},
    ), solution


def p16():
    # Rows 0 and 2 are plate lanes for Robot; rows 1 and 3 are lava lanes for Scout.
    classes = [robot_class(body="heavy"), robot_class("Scout", ctor=(), parent="Robot", methods=False, fields=False)]
    robots, insts = fleet(range(4), cls=["Robot", "Scout", "Robot", "Scout"])
    ents, nodes, tubes = [], [], []
    for row, suffix in ((0, "_a"), (2, "_b")):
        e, n, t = plate_lane(row, suffix)
        ents, nodes, tubes = ents + e, nodes + n, tubes + t
    w = world(grid(6, 4, lava=[(2, 1), (3, 1), (2, 3), (3, 3)]), robots + ents, classes, insts)
    nodes += [node("robots", "ClassNode", {"class": "Robot"}, (900, 0)),
              node("scouts", "ClassNode", {"class": "Scout"}, (900, 150))]
    return puzzle(
        16,
        "Only the scouts",
        "Scouts are a subclass of Robot; give only them hover so the heavy robots still press their plates.",
        w,
        nodes,
        tubes,
        [const("hover", text("hover"), (600, 0)), const("wheels", text("wheels"), (600, 60))],
        WIRE,
        {"and": at_goal(4, col=5)},
    ), [connect("hover.out", "scouts.movement_type")]


def p17():
    reverser = robot_class("Reverser", ctor=("movement_type",), parent="Robot", fields=False)
    reverser["methods"][0]["impl"] = "heading_from_color_reversed"
    path = [(0, 1), (1, 1), (2, 1), (2, 2), (2, 3), (3, 3), (4, 3), (4, 2), (4, 1)]
    markers = [((2, 1), 1, "red"), ((2, 3), 2, "yellow"), ((4, 3), 3, "blue")]
    w = world(grid(6, 5, lava_except(6, 5, path), markers), [robot("bot1", (0, 1))], [robot_class(), reverser])
    nodes = [
        node("on_column", "EventHandler", {"event": "OnEnterColumn", "entity": "bot1"}, (0, 0)),
        const("wheels", text("wheels"), (0, 150)),
        node("build", "ConstructorCall", {"class": "Robot"}, (250, 150), locked=False),
        node("steer", "MethodCall", {"class": "Robot", "method": "next_heading"}, (500, 50)),
        entity("bot", "bot1", (800, 50)),
    ]
    tubes = [
        tube("wheels.out", "build.movement_type"),
        tube("build.out", "steer.target"),
        tube("on_column.color", "steer.color"),
        tube("steer.heading", "bot.heading"),
    ]
    palette = [node("build_reverser", "ConstructorCall", {"class": "Reverser"}, (250, 300), locked=False)]
    solution = [
        disconnect("steer.target"),
        connect("wheels.out", "build_reverser.movement_type"),
        connect("build_reverser.out", "steer.target"),
    ]
    return puzzle(
        17,
        "Override the method",
        "This maze is mirrored: a Reverser turns the opposite way for every color.",
        w,
        nodes,
        tubes,
        palette,
        WIRE,
        {"robot_at": ["bot1", 4, 1]},
    ), solution


PUZZLES = [p1, p2, p3, p4, p5, p6, p7, p8, p9, p10, p11, p12, p13, p14, p15, p16, p17]


def main():
    (ROOT / "solutions").mkdir(parents=True, exist_ok=True)
    for make in PUZZLES:
        doc, solution = make()
        pid = doc["id"]
        (ROOT / f"p{pid}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        edits = {"format_version": 1, "edits": solution}
        (ROOT / "solutions" / f"p{pid}.json").write_text(json.dumps(edits, indent=2, sort_keys=True) + "\n")
    (ROOT / "empty.json").write_text(json.dumps({"edits": [], "format_version": 1}, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
