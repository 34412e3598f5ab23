#!/usr/bin/env python3
# One-shot generator for the bundled data/ tree (domains, scenes, robots,
# fixtures, suite). Run from the repo root; not part of the deliverable.
import json
import os

ROOT = os.path.dirname(os.path.abspath(__file__))
D = os.path.join(ROOT, "data")

# ---------------------------------------------------------------- domains
PREDICATES = """  (:predicates
    (at ?robot - robot ?target - object)
    (at-location ?object - object ?location - object)
    (holding ?robot - robot ?object - object)
    (inaction ?robot - robot)
    (opened ?object - object)
    (switched-on ?object - object)
    (sliced ?object - object))"""

ACTIONS = {
    "GoToObject": """  (:action GoToObject
    :parameters (?robot - robot ?target - object)
    :precondition (and
      (not (inaction ?robot)))
    :effect (and
      (at ?robot ?target)
      (not (inaction ?robot))))""",
    "PickupObject": """  (:action PickupObject
    :parameters (?robot - robot ?object - object ?location - object)
    :precondition (and
      (at-location ?object ?location)
      (at ?robot ?object)
      (not (inaction ?robot)))
    :effect (and
      (holding ?robot ?object)
      (not (at-location ?object ?location))
      (not (inaction ?robot))))""",
    "PutObject": """  (:action PutObject
    :parameters (?robot - robot ?object - object ?receptacle - object)
    :precondition (and
      (holding ?robot ?object)
      (at ?robot ?receptacle)
      (not (inaction ?robot)))
    :effect (and
      (at-location ?object ?receptacle)
      (not (holding ?robot ?object))
      (not (inaction ?robot))))""",
    "OpenObject": """  (:action OpenObject
    :parameters (?robot - robot ?object - object ?location - object)
    :precondition (and
      (at-location ?object ?location)
      (at ?robot ?location)
      (not (opened ?object))
      (not (inaction ?robot)))
    :effect (and
      (opened ?object)
      (not (inaction ?robot))))""",
    "CloseObject": """  (:action CloseObject
    :parameters (?robot - robot ?object - object ?location - object)
    :precondition (and
      (at-location ?object ?location)
      (at ?robot ?location)
      (opened ?object)
      (not (inaction ?robot)))
    :effect (and
      (not (opened ?object))
      (not (inaction ?robot))))""",
    "SwitchOnObject": """  (:action SwitchOnObject
    :parameters (?robot - robot ?object - object)
    :precondition (and
      (at ?robot ?object)
      (not (switched-on ?object))
      (not (inaction ?robot)))
    :effect (and
      (switched-on ?object)
      (not (inaction ?robot))))""",
    "SwitchOffObject": """  (:action SwitchOffObject
    :parameters (?robot - robot ?object - object)
    :precondition (and
      (at ?robot ?object)
      (switched-on ?object)
      (not (inaction ?robot)))
    :effect (and
      (not (switched-on ?object))
      (not (inaction ?robot))))""",
    "SliceObject": """  (:action SliceObject
    :parameters (?robot - robot ?object - object)
    :precondition (and
      (at ?robot ?object)
      (not (sliced ?object))
      (not (inaction ?robot)))
    :effect (and
      (sliced ?object)
      (not (inaction ?robot))))""",
}

ARCHETYPES = {
    "robot1": ["GoToObject", "OpenObject", "CloseObject", "SwitchOnObject", "SwitchOffObject"],
    "robot2": ["GoToObject", "PickupObject", "PutObject"],
    "robot3": ["GoToObject", "PickupObject", "PutObject", "OpenObject", "CloseObject",
               "SwitchOnObject", "SwitchOffObject", "SliceObject"],
    "robot4": ["GoToObject", "PickupObject", "PutObject", "SliceObject"],
}


def write(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        f.write(text)


def domain_text(name, skills):
    parts = [f"; {name}: robot skill domain", f"(define (domain {name})",
             "  (:types robot object)", PREDICATES]
    parts += [ACTIONS[s] for s in skills]
    parts.append(")")
    return "\n".join(parts) + "\n"


for name, skills in ARCHETYPES.items():
    write(os.path.join(D, "domains", f"{name}.pddl"), domain_text(name, skills))

# verbatim pick-up listing, wrapped as a minimal robot domain
PICKUP_FRAGMENT = """(define (domain robot2)
  (:types robot object)
  (:predicates
    (at-location ?object - object ?location - object)
    (at ?robot - robot ?location - object)
    (inaction ?robot - robot)
    (holding ?robot - robot ?object - object))
(:action PickupObject
  :parameters (?robot - robot
               ?object - object
               ?location - object)
  :precondition (and
                  (at-location ?object
                   ?location)
                  (at ?robot ?location)
                  (not(inaction ?robot)))
  :effect (and
            (holding ?robot ?object)
            (not(inaction ?robot)))
)
)
"""
write(os.path.join(D, "domains", "pickup_fragment.pddl"), PICKUP_FRAGMENT)

PLATE_PROBLEM = """(define (problem prepare-plate-with-egg)
  (:domain robot2)
  (:objects
    Robot2 - robot
    Egg Plate Location1 Location2 - object
  )
  (:init
    (at Robot2 InitLoaction)
    (at-location Egg Location1)
    (at-location Plate Location2)
    (not (inaction Robot2))
  )
  (:goal
    (and(at-location Egg Plate)
      (not (holding Robot2 Egg))
      (not (holding Robot2 Plate)))
  )
)
"""
write(os.path.join(D, "problems", "prepare_plate_with_egg.pddl"), PLATE_PROBLEM)

# ---------------------------------------------------------------- robots
for name in ARCHETYPES:
    n = name[-1]
    write(os.path.join(D, "robots", f"{name}.json"), json.dumps({
        "id": f"Robot{n}",
        "domain": f"../domains/{name}.pddl",
        "initial_location": f"Dock{n}",
    }, indent=2) + "\n")

# ---------------------------------------------------------------- sketches


def step(skill, *args):
    a = list(args)
    if skill == "GoToObject":
        t = a[0]
        note = f"Robot goes to the {t}."
        params = ["?robot", t]
        pre = ["(not (inaction ?robot))"]
        eff = [f"(at ?robot {t})", "(not (inaction ?robot))"]
    elif skill == "PickupObject":
        o, l = a
        note = f"Robot picks up the {o}."
        params = ["?robot", o, l]
        pre = [f"(at-location {o} {l})", f"(at ?robot {o})"]
        eff = [f"(holding ?robot {o})", f"(not (at-location {o} {l}))"]
    elif skill == "PutObject":
        o, r = a
        note = f"Robot puts the {o} on the {r}."
        params = ["?robot", o, r]
        pre = [f"(holding ?robot {o})", f"(at ?robot {r})"]
        eff = [f"(at-location {o} {r})", f"(not (holding ?robot {o}))"]
    elif skill == "OpenObject":
        o, l = a
        note = f"Robot opens the {o}."
        params = ["?robot", o, l]
        pre = [f"(at-location {o} {l})", f"(at ?robot {l})", f"(not (opened {o}))"]
        eff = [f"(opened {o})"]
    elif skill == "CloseObject":
        o, l = a
        note = f"Robot closes the {o}."
        params = ["?robot", o, l]
        pre = [f"(at-location {o} {l})", f"(at ?robot {l})", f"(opened {o})"]
        eff = [f"(not (opened {o}))"]
    elif skill == "SwitchOnObject":
        o = a[0]
        note = f"Robot switches on the {o}."
        params = ["?robot", o]
        pre = [f"(at ?robot {o})", f"(not (switched-on {o}))"]
        eff = [f"(switched-on {o})"]
    elif skill == "SwitchOffObject":
        o = a[0]
        note = f"Robot switches off the {o}."
        params = ["?robot", o]
        pre = [f"(at ?robot {o})", f"(switched-on {o})"]
        eff = [f"(not (switched-on {o}))"]
    elif skill == "SliceObject":
        o = a[0]
        note = f"Robot slices the {o}."
        params = ["?robot", o]
        pre = [f"(at ?robot {o})", f"(not (sliced {o}))"]
        eff = [f"(sliced {o})"]
    else:
        raise ValueError(skill)
    return (f"{skill}: {note}\n"
            f"- Parameters: {', '.join(params)}\n"
            f"- Preconditions: {', '.join(pre)}\n"
            f"- Effects: {', '.join(eff)}")


def subtask_block(n, desc, skills, goal, steps, after="none"):
    lines = [f"Subtask {n}: {desc} (skills required: {', '.join(skills)})",
             f"Goal: {', '.join(goal)}", f"After: {after}"]
    lines += steps
    return "\n".join(lines)


def problem_text(pname, dname, robot, objects, init, goal):
    obj_lines = "\n".join(f"    {o} - object" for o in objects)
    init_lines = "\n".join(f"    {a}" for a in init)
    goal_lines = "\n".join(f"    {g}" for g in goal)
    return (f"(define (problem {pname})\n  (:domain {dname})\n  (:objects\n"
            f"    {robot} - robot\n{obj_lines}\n  )\n  (:init\n{init_lines}\n  )\n"
            f"  (:goal (and\n{goal_lines}\n  ))\n)")


# ---------------------------------------------------------------- scenarios
SCENARIOS = []


def scenario(sid, category, instruction, robots, objects, extra_init, subtasks,
             allocation, problems, goal_conditions, gt_ts, gt_tr):
    SCENARIOS.append(dict(id=sid, category=category, instruction=instruction,
                          robots=robots, objects=objects, extra_init=extra_init,
                          subtasks=subtasks, allocation=allocation, problems=problems,
                          goal_conditions=goal_conditions, gt_ts=gt_ts, gt_tr=gt_tr))


GOTO, PICK, PUT, OPEN, CLOSE, SWON, SWOFF, SLICE = ("GoToObject", "PickupObject", "PutObject",
                                                    "OpenObject", "CloseObject", "SwitchOnObject",
                                                    "SwitchOffObject", "SliceObject")

# ---- c1: egg to fridge + apple slices -------------------------------------
scenario(
    "c1_egg_apple", "compound",
    "Put the egg in the fridge and prepare apple slices.",
    ["robot3", "robot4"],
    [("Egg", "CounterTop"), ("CounterTop", None), ("Kitchen", None), ("Fridge", "Kitchen"),
     ("Apple", "FruitBowl"), ("FruitBowl", None), ("CuttingBoard", None),
     ("Dock3", None), ("Dock4", None)],
    [],
    [subtask_block(1, "Put the egg in the fridge",
                   [GOTO, PICK, PUT, OPEN],
                   ["(at-location Egg Fridge)", "(opened Fridge)"],
                   [step(GOTO, "Egg"), step(PICK, "Egg", "CounterTop"),
                    step(GOTO, "Kitchen"), step(OPEN, "Fridge", "Kitchen"),
                    step(GOTO, "Fridge"), step(PUT, "Egg", "Fridge")]),
     subtask_block(2, "Prepare apple slices",
                   [GOTO, PICK, PUT, SLICE],
                   ["(sliced Apple)", "(at-location Apple CuttingBoard)"],
                   [step(GOTO, "Apple"), step(PICK, "Apple", "FruitBowl"),
                    step(GOTO, "CuttingBoard"), step(PUT, "Apple", "CuttingBoard"),
                    step(SLICE, "Apple")])],
    ["Subtask 1 -> Robot3 (skills: GoToObject, PickupObject, PutObject, OpenObject)",
     "Subtask 2 -> Robot4 (skills: GoToObject, PickupObject, PutObject, SliceObject)"],
    {("subtask1", "Robot3"): problem_text(
        "put-egg-in-fridge", "robot3", "Robot3",
        ["Egg", "CounterTop", "Kitchen", "Fridge", "Dock3"],
        ["(at Robot3 Dock3)", "(at-location Egg CounterTop)", "(at-location Fridge Kitchen)"],
        ["(at-location Egg Fridge)", "(opened Fridge)"]),
     ("subtask2", "Robot4"): problem_text(
        "prepare-apple-slices", "robot4", "Robot4",
        ["Apple", "FruitBowl", "CuttingBoard", "Dock4"],
        ["(at Robot4 Dock4)", "(at-location Apple FruitBowl)"],
        ["(sliced Apple)", "(at-location Apple CuttingBoard)"])},
    ["(at-location Egg Fridge)", "(opened Fridge)", "(sliced Apple)",
     "(at-location Apple CuttingBoard)"],
    6, 11)

# ---- c2: desk scenario (lights, phone to bed, book on desk) ----------------
scenario(
    "c2_desk", "compound",
    "Turn off the lights, put the cellphone on the bed, and leave the book on the desk open.",
    ["robot1", "robot2", "robot3"],
    [("LightSwitch", None), ("CellPhone", "Desk"), ("Desk", None), ("Bed", None),
     ("Book", "Desk"), ("Dock1", None), ("Dock2", None), ("Dock3", None)],
    ["(switched-on LightSwitch)"],
    [subtask_block(1, "Turn off the lights",
                   [GOTO, SWOFF],
                   ["(not (switched-on LightSwitch))"],
                   [step(GOTO, "LightSwitch"), step(SWOFF, "LightSwitch")]),
     subtask_block(2, "Put the cellphone on the bed",
                   [GOTO, PICK, PUT],
                   ["(at-location CellPhone Bed)"],
                   [step(GOTO, "CellPhone"), step(PICK, "CellPhone", "Desk"),
                    step(GOTO, "Bed"), step(PUT, "CellPhone", "Bed")]),
     subtask_block(3, "Open the book on the desk",
                   [GOTO, OPEN],
                   ["(opened Book)"],
                   [step(GOTO, "Desk"), step(OPEN, "Book", "Desk")])],
    ["Subtask 1 -> Robot1 (skills: GoToObject, SwitchOffObject)",
     "Subtask 2 -> Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 3 -> Robot3 (skills: GoToObject, OpenObject)"],
    {("subtask1", "Robot1"): problem_text(
        "lights-off", "robot1", "Robot1",
        ["LightSwitch", "Dock1"],
        ["(at Robot1 Dock1)", "(switched-on LightSwitch)"],
        ["(not (switched-on LightSwitch))"]),
     ("subtask2", "Robot2"): problem_text(
        "cellphone-to-bed", "robot2", "Robot2",
        ["CellPhone", "Desk", "Bed", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location CellPhone Desk)"],
        ["(at-location CellPhone Bed)"]),
     ("subtask3", "Robot3"): problem_text(
        "open-book", "robot3", "Robot3",
        ["Book", "Desk", "Dock3"],
        ["(at Robot3 Dock3)", "(at-location Book Desk)"],
        ["(opened Book)"])},
    ["(not (switched-on LightSwitch))", "(at-location CellPhone Bed)", "(opened Book)"],
    4, 8)

# ---- c3: plate with egg (verbatim problem) + watering can ------------------
scenario(
    "c3_plate_plant", "compound",
    "Prepare a plate with the egg and bring the watering can to the fig plant.",
    ["robot2", "robot3"],
    [("Egg", "Location1"), ("Plate", "Location2"), ("Location1", None), ("Location2", None),
     ("WateringCan", "Shed"), ("Shed", None), ("FigPlant", None),
     ("Dock2", None), ("Dock3", None)],
    [],
    [subtask_block(1, "Prepare plate with egg",
                   [GOTO, PICK, PUT],
                   ["(at-location Egg Plate)", "(not (holding Robot2 Egg))",
                    "(not (holding Robot2 Plate))"],
                   [step(GOTO, "Egg"), step(PICK, "Egg", "Location1"),
                    step(GOTO, "Plate"), step(PUT, "Egg", "Plate")]),
     subtask_block(2, "Bring the watering can to the fig plant",
                   [GOTO, PICK, PUT],
                   ["(at-location WateringCan FigPlant)"],
                   [step(GOTO, "WateringCan"), step(PICK, "WateringCan", "Shed"),
                    step(GOTO, "FigPlant"), step(PUT, "WateringCan", "FigPlant")])],
    ["Subtask 1 -> Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot3 (skills: GoToObject, PickupObject, PutObject)"],
    {("subtask1", "Robot2"): PLATE_PROBLEM.rstrip("\n"),
     ("subtask2", "Robot3"): problem_text(
        "watering-can-to-plant", "robot3", "Robot3",
        ["WateringCan", "Shed", "FigPlant", "Dock3"],
        ["(at Robot3 Dock3)", "(at-location WateringCan Shed)"],
        ["(at-location WateringCan FigPlant)"])},
    ["(at-location Egg Plate)", "(not (holding Robot2 Egg))", "(not (holding Robot2 Plate))",
     "(at-location WateringCan FigPlant)"],
    4, 8)

# ---- c4: laundry ------------------------------------------------------------
scenario(
    "c4_laundry", "compound",
    "Put the shirt in the laundry basket and switch on the washer.",
    ["robot1", "robot2"],
    [("Shirt", "Bed"), ("Bed", None), ("LaundryBasket", None), ("Washer", None),
     ("Dock1", None), ("Dock2", None)],
    [],
    [subtask_block(1, "Put the shirt in the laundry basket",
                   [GOTO, PICK, PUT],
                   ["(at-location Shirt LaundryBasket)"],
                   [step(GOTO, "Shirt"), step(PICK, "Shirt", "Bed"),
                    step(GOTO, "LaundryBasket"), step(PUT, "Shirt", "LaundryBasket")]),
     subtask_block(2, "Switch on the washer",
                   [GOTO, SWON],
                   ["(switched-on Washer)"],
                   [step(GOTO, "Washer"), step(SWON, "Washer")])],
    ["Subtask 1 -> Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot1 (skills: GoToObject, SwitchOnObject)"],
    {("subtask1", "Robot2"): problem_text(
        "shirt-to-basket", "robot2", "Robot2",
        ["Shirt", "Bed", "LaundryBasket", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location Shirt Bed)"],
        ["(at-location Shirt LaundryBasket)"]),
     ("subtask2", "Robot1"): problem_text(
        "washer-on", "robot1", "Robot1",
        ["Washer", "Dock1"],
        ["(at Robot1 Dock1)"],
        ["(switched-on Washer)"])},
    ["(at-location Shirt LaundryBasket)", "(switched-on Washer)"],
    4, 6)

# ---- c5: two books to one shelf (conflict serialization) --------------------
scenario(
    "c5_books", "compound",
    "Return the red book and the blue book to the shelf.",
    ["robot2", "robot4"],
    [("RedBook", "Armchair"), ("BlueBook", "SideTable"), ("Armchair", None),
     ("SideTable", None), ("Shelf", None), ("Dock2", None), ("Dock4", None)],
    [],
    [subtask_block(1, "Return the red book to the shelf",
                   [GOTO, PICK, PUT],
                   ["(at-location RedBook Shelf)"],
                   [step(GOTO, "RedBook"), step(PICK, "RedBook", "Armchair"),
                    step(GOTO, "Shelf"), step(PUT, "RedBook", "Shelf")]),
     subtask_block(2, "Return the blue book to the shelf",
                   [GOTO, PICK, PUT],
                   ["(at-location BlueBook Shelf)"],
                   [step(GOTO, "BlueBook"), step(PICK, "BlueBook", "SideTable"),
                    step(GOTO, "Shelf"), step(PUT, "BlueBook", "Shelf")])],
    ["Subtask 1 -> Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot4 (skills: GoToObject, PickupObject, PutObject)"],
    {("subtask1", "Robot2"): problem_text(
        "red-book", "robot2", "Robot2",
        ["RedBook", "Armchair", "Shelf", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location RedBook Armchair)"],
        ["(at-location RedBook Shelf)"]),
     ("subtask2", "Robot4"): problem_text(
        "blue-book", "robot4", "Robot4",
        ["BlueBook", "SideTable", "Shelf", "Dock4"],
        ["(at Robot4 Dock4)", "(at-location BlueBook SideTable)"],
        ["(at-location BlueBook Shelf)"])},
    ["(at-location RedBook Shelf)", "(at-location BlueBook Shelf)"],
    6, 8)

# ---- c6: trash + light ------------------------------------------------------
scenario(
    "c6_trash", "compound",
    "Throw the soda can and the wrapper into the bin and turn off the kitchen light.",
    ["robot1", "robot2", "robot4"],
    [("SodaCan", "Table"), ("Wrapper", "Sofa"), ("Table", None), ("Sofa", None),
     ("Bin", None), ("KitchenLight", None), ("Dock1", None), ("Dock2", None), ("Dock4", None)],
    ["(switched-on KitchenLight)"],
    [subtask_block(1, "Throw the soda can into the bin",
                   [GOTO, PICK, PUT],
                   ["(at-location SodaCan Bin)"],
                   [step(GOTO, "SodaCan"), step(PICK, "SodaCan", "Table"),
                    step(GOTO, "Bin"), step(PUT, "SodaCan", "Bin")]),
     subtask_block(2, "Throw the wrapper into the bin",
                   [GOTO, PICK, PUT],
                   ["(at-location Wrapper Bin)"],
                   [step(GOTO, "Wrapper"), step(PICK, "Wrapper", "Sofa"),
                    step(GOTO, "Bin"), step(PUT, "Wrapper", "Bin")]),
     subtask_block(3, "Turn off the kitchen light",
                   [GOTO, SWOFF],
                   ["(not (switched-on KitchenLight))"],
                   [step(GOTO, "KitchenLight"), step(SWOFF, "KitchenLight")])],
    ["Subtask 1 -> Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot4 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 3 -> Robot1 (skills: GoToObject, SwitchOffObject)"],
    {("subtask1", "Robot2"): problem_text(
        "can-to-bin", "robot2", "Robot2",
        ["SodaCan", "Table", "Bin", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location SodaCan Table)"],
        ["(at-location SodaCan Bin)"]),
     ("subtask2", "Robot4"): problem_text(
        "wrapper-to-bin", "robot4", "Robot4",
        ["Wrapper", "Sofa", "Bin", "Dock4"],
        ["(at Robot4 Dock4)", "(at-location Wrapper Sofa)"],
        ["(at-location Wrapper Bin)"]),
     ("subtask3", "Robot1"): problem_text(
        "kitchen-light-off", "robot1", "Robot1",
        ["KitchenLight", "Dock1"],
        ["(at Robot1 Dock1)", "(switched-on KitchenLight)"],
        ["(not (switched-on KitchenLight))"])},
    ["(at-location SodaCan Bin)", "(at-location Wrapper Bin)",
     "(not (switched-on KitchenLight))"],
    6, 10)

# ---- x1: drawer (split allocation, Fig-3 second task analog) ----------------
scenario(
    "x1_drawer", "complex",
    "Put the keys and the watch in the drawer, then turn off the desk lamp and the laptop.",
    ["robot1", "robot2"],
    [("Keys", "SideTable"), ("Watch", "SideTable"), ("SideTable", None),
     ("Drawer", "Dresser"), ("Dresser", None), ("DeskLamp", None), ("Laptop", None),
     ("Dock1", None), ("Dock2", None)],
    ["(switched-on DeskLamp)", "(switched-on Laptop)"],
    [subtask_block(1, "Put the keys and the watch in the drawer",
                   [GOTO, OPEN, PICK, PUT],
                   ["(at-location Keys Drawer)", "(at-location Watch Drawer)"],
                   [step(GOTO, "Dresser"), step(OPEN, "Drawer", "Dresser"),
                    step(GOTO, "Keys"), step(PICK, "Keys", "SideTable"),
                    step(GOTO, "Drawer"), step(PUT, "Keys", "Drawer"),
                    step(GOTO, "Watch"), step(PICK, "Watch", "SideTable"),
                    step(PUT, "Watch", "Drawer")]),
     subtask_block(2, "Turn off the desk lamp and the laptop",
                   [GOTO, SWOFF],
                   ["(not (switched-on DeskLamp))", "(not (switched-on Laptop))"],
                   [step(GOTO, "DeskLamp"), step(SWOFF, "DeskLamp"),
                    step(GOTO, "Laptop"), step(SWOFF, "Laptop")])],
    ["Subtask 1 -> Robot1 (skills: GoToObject, OpenObject), "
     "Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot1 (skills: GoToObject, SwitchOffObject)"],
    {("subtask1", "Robot1"): problem_text(
        "open-the-drawer", "robot1", "Robot1",
        ["Drawer", "Dresser", "Dock1"],
        ["(at Robot1 Dock1)", "(at-location Drawer Dresser)"],
        ["(opened Drawer)"]),
     ("subtask1", "Robot2"): problem_text(
        "keys-watch-to-drawer", "robot2", "Robot2",
        ["Keys", "Watch", "SideTable", "Drawer", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location Keys SideTable)", "(at-location Watch SideTable)"],
        ["(at-location Keys Drawer)", "(at-location Watch Drawer)"]),
     ("subtask2", "Robot1"): problem_text(
        "lamp-laptop-off", "robot1", "Robot1",
        ["DeskLamp", "Laptop", "Dock1"],
        ["(at Robot1 Dock1)", "(switched-on DeskLamp)", "(switched-on Laptop)"],
        ["(not (switched-on DeskLamp))", "(not (switched-on Laptop))"])},
    ["(at-location Keys Drawer)", "(at-location Watch Drawer)",
     "(not (switched-on DeskLamp))", "(not (switched-on Laptop))"],
    7, 13)

# ---- x2: pizza to fridge (split) + dishwasher --------------------------------
scenario(
    "x2_pizza", "complex",
    "Put the leftover pizza in the fridge and turn on the dishwasher.",
    ["robot1", "robot2"],
    [("Pizza", "Counter"), ("Counter", None), ("Kitchen", None), ("Fridge", "Kitchen"),
     ("Dishwasher", None), ("Dock1", None), ("Dock2", None)],
    [],
    [subtask_block(1, "Put the leftover pizza in the fridge",
                   [GOTO, OPEN, PICK, PUT],
                   ["(at-location Pizza Fridge)", "(opened Fridge)"],
                   [step(GOTO, "Kitchen"), step(OPEN, "Fridge", "Kitchen"),
                    step(GOTO, "Pizza"), step(PICK, "Pizza", "Counter"),
                    step(GOTO, "Fridge"), step(PUT, "Pizza", "Fridge")]),
     subtask_block(2, "Turn on the dishwasher",
                   [GOTO, SWON],
                   ["(switched-on Dishwasher)"],
                   [step(GOTO, "Dishwasher"), step(SWON, "Dishwasher")])],
    ["Subtask 1 -> Robot1 (skills: GoToObject, OpenObject), "
     "Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot1 (skills: GoToObject, SwitchOnObject)"],
    {("subtask1", "Robot1"): problem_text(
        "open-the-fridge", "robot1", "Robot1",
        ["Fridge", "Kitchen", "Dock1"],
        ["(at Robot1 Dock1)", "(at-location Fridge Kitchen)"],
        ["(opened Fridge)"]),
     ("subtask1", "Robot2"): problem_text(
        "pizza-to-fridge", "robot2", "Robot2",
        ["Pizza", "Counter", "Fridge", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location Pizza Counter)"],
        ["(at-location Pizza Fridge)"]),
     ("subtask2", "Robot1"): problem_text(
        "dishwasher-on", "robot1", "Robot1",
        ["Dishwasher", "Dock1"],
        ["(at Robot1 Dock1)"],
        ["(switched-on Dishwasher)"])},
    ["(at-location Pizza Fridge)", "(opened Fridge)", "(switched-on Dishwasher)"],
    4, 8)

# ---- x3: journal to nightstand drawer (split) + fan + heater ------------------
scenario(
    "x3_bedroom", "complex",
    "Put the journal in the nightstand drawer and switch off the ceiling fan and the heater.",
    ["robot1", "robot2", "robot3"],
    [("Journal", "WritingDesk"), ("WritingDesk", None), ("Bedroom", None),
     ("NightDrawer", "Bedroom"), ("CeilingFan", None), ("Heater", None),
     ("Dock1", None), ("Dock2", None), ("Dock3", None)],
    ["(switched-on CeilingFan)", "(switched-on Heater)"],
    [subtask_block(1, "Put the journal in the nightstand drawer",
                   [GOTO, OPEN, PICK, PUT],
                   ["(at-location Journal NightDrawer)"],
                   [step(GOTO, "Bedroom"), step(OPEN, "NightDrawer", "Bedroom"),
                    step(GOTO, "Journal"), step(PICK, "Journal", "WritingDesk"),
                    step(GOTO, "NightDrawer"), step(PUT, "Journal", "NightDrawer")]),
     subtask_block(2, "Switch off the ceiling fan",
                   [GOTO, SWOFF],
                   ["(not (switched-on CeilingFan))"],
                   [step(GOTO, "CeilingFan"), step(SWOFF, "CeilingFan")]),
     subtask_block(3, "Switch off the heater",
                   [GOTO, SWOFF],
                   ["(not (switched-on Heater))"],
                   [step(GOTO, "Heater"), step(SWOFF, "Heater")])],
    ["Subtask 1 -> Robot1 (skills: GoToObject, OpenObject), "
     "Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot3 (skills: GoToObject, SwitchOffObject)",
     "Subtask 3 -> Robot1 (skills: GoToObject, SwitchOffObject)"],
    {("subtask1", "Robot1"): problem_text(
        "open-night-drawer", "robot1", "Robot1",
        ["NightDrawer", "Bedroom", "Dock1"],
        ["(at Robot1 Dock1)", "(at-location NightDrawer Bedroom)"],
        ["(opened NightDrawer)"]),
     ("subtask1", "Robot2"): problem_text(
        "journal-to-drawer", "robot2", "Robot2",
        ["Journal", "WritingDesk", "NightDrawer", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location Journal WritingDesk)"],
        ["(at-location Journal NightDrawer)"]),
     ("subtask2", "Robot3"): problem_text(
        "fan-off", "robot3", "Robot3",
        ["CeilingFan", "Dock3"],
        ["(at Robot3 Dock3)", "(switched-on CeilingFan)"],
        ["(not (switched-on CeilingFan))"]),
     ("subtask3", "Robot1"): problem_text(
        "heater-off", "robot1", "Robot1",
        ["Heater", "Dock1"],
        ["(at Robot1 Dock1)", "(switched-on Heater)"],
        ["(not (switched-on Heater))"])},
    ["(at-location Journal NightDrawer)", "(not (switched-on CeilingFan))",
     "(not (switched-on Heater))"],
    4, 10)

# ---- x4: redundant switch-off (Exe < 1 by design) -----------------------------
scenario(
    "x4_lamp_tv", "complex",
    "Make sure the floor lamp and the television are switched off.",
    ["robot1", "robot3"],
    [("FloorLamp", None), ("Television", None), ("Dock1", None), ("Dock3", None)],
    ["(switched-on FloorLamp)", "(switched-on Television)"],
    [subtask_block(1, "Switch off the floor lamp",
                   [GOTO, SWOFF],
                   ["(not (switched-on FloorLamp))"],
                   [step(GOTO, "FloorLamp"), step(SWOFF, "FloorLamp")]),
     subtask_block(2, "Switch off the television and double-check the floor lamp",
                   [GOTO, SWOFF],
                   ["(not (switched-on Television))", "(not (switched-on FloorLamp))"],
                   [step(GOTO, "Television"), step(SWOFF, "Television"),
                    step(GOTO, "FloorLamp"), step(SWOFF, "FloorLamp")])],
    ["Subtask 1 -> Robot1 (skills: GoToObject, SwitchOffObject)",
     "Subtask 2 -> Robot3 (skills: GoToObject, SwitchOffObject)"],
    {("subtask1", "Robot1"): problem_text(
        "floor-lamp-off", "robot1", "Robot1",
        ["FloorLamp", "Dock1"],
        ["(at Robot1 Dock1)", "(switched-on FloorLamp)"],
        ["(not (switched-on FloorLamp))"]),
     ("subtask2", "Robot3"): problem_text(
        "tv-and-lamp-off", "robot3", "Robot3",
        ["Television", "FloorLamp", "Dock3"],
        ["(at Robot3 Dock3)", "(switched-on Television)", "(switched-on FloorLamp)"],
        ["(not (switched-on Television))", "(not (switched-on FloorLamp))"])},
    ["(not (switched-on FloorLamp))", "(not (switched-on Television))"],
    2, 4)

# ---- v1..v4: vague instructions ----------------------------------------------
scenario(
    "v1_tidy_desk", "vague",
    "Tidy up the study desk.",
    ["robot2", "robot4"],
    [("Notebook", "StudyDesk"), ("Mug", "StudyDesk"), ("StudyDesk", None),
     ("BookShelf", None), ("Sink", None), ("Dock2", None), ("Dock4", None)],
    [],
    [subtask_block(1, "Put the notebook on the book shelf",
                   [GOTO, PICK, PUT],
                   ["(at-location Notebook BookShelf)"],
                   [step(GOTO, "Notebook"), step(PICK, "Notebook", "StudyDesk"),
                    step(GOTO, "BookShelf"), step(PUT, "Notebook", "BookShelf")]),
     subtask_block(2, "Take the mug to the sink",
                   [GOTO, PICK, PUT],
                   ["(at-location Mug Sink)"],
                   [step(GOTO, "Mug"), step(PICK, "Mug", "StudyDesk"),
                    step(GOTO, "Sink"), step(PUT, "Mug", "Sink")])],
    ["Subtask 1 -> Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot4 (skills: GoToObject, PickupObject, PutObject)"],
    {("subtask1", "Robot2"): problem_text(
        "notebook-to-shelf", "robot2", "Robot2",
        ["Notebook", "StudyDesk", "BookShelf", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location Notebook StudyDesk)"],
        ["(at-location Notebook BookShelf)"]),
     ("subtask2", "Robot4"): problem_text(
        "mug-to-sink", "robot4", "Robot4",
        ["Mug", "StudyDesk", "Sink", "Dock4"],
        ["(at Robot4 Dock4)", "(at-location Mug StudyDesk)"],
        ["(at-location Mug Sink)"])},
    ["(at-location Notebook BookShelf)", "(at-location Mug Sink)"],
    4, 8)

scenario(
    "v2_movie", "vague",
    "Get the living room ready for a movie night.",
    ["robot1", "robot2"],
    [("LivingLight", None), ("TelevisionSet", None), ("Chips", "Pantry"), ("Pantry", None),
     ("CoffeeTable", None), ("Dock1", None), ("Dock2", None)],
    ["(switched-on LivingLight)"],
    [subtask_block(1, "Dim the room and start the television",
                   [GOTO, SWOFF, SWON],
                   ["(not (switched-on LivingLight))", "(switched-on TelevisionSet)"],
                   [step(GOTO, "LivingLight"), step(SWOFF, "LivingLight"),
                    step(GOTO, "TelevisionSet"), step(SWON, "TelevisionSet")]),
     subtask_block(2, "Bring the chips to the coffee table",
                   [GOTO, PICK, PUT],
                   ["(at-location Chips CoffeeTable)"],
                   [step(GOTO, "Chips"), step(PICK, "Chips", "Pantry"),
                    step(GOTO, "CoffeeTable"), step(PUT, "Chips", "CoffeeTable")])],
    ["Subtask 1 -> Robot1 (skills: GoToObject, SwitchOffObject, SwitchOnObject)",
     "Subtask 2 -> Robot2 (skills: GoToObject, PickupObject, PutObject)"],
    {("subtask1", "Robot1"): problem_text(
        "movie-lights", "robot1", "Robot1",
        ["LivingLight", "TelevisionSet", "Dock1"],
        ["(at Robot1 Dock1)", "(switched-on LivingLight)"],
        ["(not (switched-on LivingLight))", "(switched-on TelevisionSet)"]),
     ("subtask2", "Robot2"): problem_text(
        "chips-to-table", "robot2", "Robot2",
        ["Chips", "Pantry", "CoffeeTable", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location Chips Pantry)"],
        ["(at-location Chips CoffeeTable)"])},
    ["(not (switched-on LivingLight))", "(switched-on TelevisionSet)",
     "(at-location Chips CoffeeTable)"],
    4, 8)

scenario(
    "v3_morning", "vague",
    "Make the bedroom ready for the morning.",
    ["robot1", "robot2"],
    [("Curtains", "Window"), ("Window", None), ("BedLamp", None),
     ("Novel", "Quilt"), ("Quilt", None), ("BedsideTable", None),
     ("Dock1", None), ("Dock2", None)],
    ["(switched-on BedLamp)"],
    [subtask_block(1, "Open the curtains and switch off the bed lamp",
                   [GOTO, OPEN, SWOFF],
                   ["(opened Curtains)", "(not (switched-on BedLamp))"],
                   [step(GOTO, "Window"), step(OPEN, "Curtains", "Window"),
                    step(GOTO, "BedLamp"), step(SWOFF, "BedLamp")]),
     subtask_block(2, "Put the novel on the bedside table",
                   [GOTO, PICK, PUT],
                   ["(at-location Novel BedsideTable)"],
                   [step(GOTO, "Novel"), step(PICK, "Novel", "Quilt"),
                    step(GOTO, "BedsideTable"), step(PUT, "Novel", "BedsideTable")])],
    ["Subtask 1 -> Robot1 (skills: GoToObject, OpenObject, SwitchOffObject)",
     "Subtask 2 -> Robot2 (skills: GoToObject, PickupObject, PutObject)"],
    {("subtask1", "Robot1"): problem_text(
        "curtains-and-lamp", "robot1", "Robot1",
        ["Curtains", "Window", "BedLamp", "Dock1"],
        ["(at Robot1 Dock1)", "(at-location Curtains Window)", "(switched-on BedLamp)"],
        ["(opened Curtains)", "(not (switched-on BedLamp))"]),
     ("subtask2", "Robot2"): problem_text(
        "novel-to-table", "robot2", "Robot2",
        ["Novel", "Quilt", "BedsideTable", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location Novel Quilt)"],
        ["(at-location Novel BedsideTable)"])},
    ["(opened Curtains)", "(not (switched-on BedLamp))", "(at-location Novel BedsideTable)"],
    4, 8)

# v4 deliberately under-decomposes: the junk drawer is never closed, so one
# goal condition stays unmet (success=false, GCR 2/3).
scenario(
    "v4_kitchen_reset", "vague",
    "Reset the kitchen for tomorrow.",
    ["robot1", "robot2"],
    [("DirtyMug", "Counter"), ("Counter", None), ("KitchenSink", None), ("Kettle", None),
     ("JunkDrawer", "Counter"), ("Dock1", None), ("Dock2", None)],
    ["(switched-on Kettle)", "(opened JunkDrawer)"],
    [subtask_block(1, "Take the dirty mug to the sink",
                   [GOTO, PICK, PUT],
                   ["(at-location DirtyMug KitchenSink)"],
                   [step(GOTO, "DirtyMug"), step(PICK, "DirtyMug", "Counter"),
                    step(GOTO, "KitchenSink"), step(PUT, "DirtyMug", "KitchenSink")]),
     subtask_block(2, "Switch off the kettle",
                   [GOTO, SWOFF],
                   ["(not (switched-on Kettle))"],
                   [step(GOTO, "Kettle"), step(SWOFF, "Kettle")])],
    ["Subtask 1 -> Robot2 (skills: GoToObject, PickupObject, PutObject)",
     "Subtask 2 -> Robot1 (skills: GoToObject, SwitchOffObject)"],
    {("subtask1", "Robot2"): problem_text(
        "mug-to-sink", "robot2", "Robot2",
        ["DirtyMug", "Counter", "KitchenSink", "Dock2"],
        ["(at Robot2 Dock2)", "(at-location DirtyMug Counter)"],
        ["(at-location DirtyMug KitchenSink)"]),
     ("subtask2", "Robot1"): problem_text(
        "kettle-off", "robot1", "Robot1",
        ["Kettle", "Dock1"],
        ["(at Robot1 Dock1)", "(switched-on Kettle)"],
        ["(not (switched-on Kettle))"])},
    ["(at-location DirtyMug KitchenSink)", "(not (switched-on Kettle))",
     "(not (opened JunkDrawer))"],
    4, 8)

# ---------------------------------------------------------------- emit
suite_tasks = []
for sc in SCENARIOS:
    # scene
    scene = {"objects": [], "init": sc["extra_init"]}
    for name, loc in sc["objects"]:
        obj = {"name": name}
        if loc:
            obj["location"] = loc
        scene["objects"].append(obj)
    write(os.path.join(D, "scenes", f"{sc['id']}.json"), json.dumps(scene, indent=2) + "\n")

    # fixtures
    blocks = []
    blocks.append(f"### scenario: {sc['id']} | role: precondition_identifier | turn: 0\n"
                  + "\n\n".join(sc["subtasks"]))
    blocks.append(f"### scenario: {sc['id']} | role: task_allocator | turn: 0\n"
                  "Task Decomposition Analysis\n" + "\n".join(sc["allocation"])
                  + "\nDependencies: none")
    for (subtask, robot), text in sc["problems"].items():
        blocks.append(f"### scenario: {sc['id']} | role: problem_generator/{subtask}/{robot} "
                      f"| turn: 0\n{text}")
    write(os.path.join(D, "fixtures", f"{sc['id']}.fixtures"), "\n\n".join(blocks) + "\n")

    suite_tasks.append({
        "id": sc["id"],
        "category": sc["category"],
        "instruction": sc["instruction"],
        "scene": f"../scenes/{sc['id']}.json",
        "robots": [f"../robots/{r}.json" for r in sc["robots"]],
        "goal_conditions": sc["goal_conditions"],
        "gt_timesteps": sc["gt_ts"],
        "gt_transitions": sc["gt_tr"],
    })

write(os.path.join(D, "suites", "desk_suite.json"),
      json.dumps({"tasks": suite_tasks}, indent=2) + "\n")

print(f"wrote {len(SCENARIOS)} scenarios")
