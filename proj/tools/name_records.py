"""Fills "?" record names in a database file with GAP's StructureDescription.

Usage: name_records.py FILE
GAP is restarted whenever one description takes longer than 20 seconds; that
record is then named SmallGroup(n,i). GAP_CMD and GAP_LD_PATH override the
interpreter location.
"""
import os, select, subprocess, sys, resource

GAP = os.environ.get("GAP_CMD", "gap").split() + ["-A", "-q", "-b"]
ENV = dict(os.environ, TERM="xterm")
if "GAP_LD_PATH" in os.environ:
    ENV["LD_LIBRARY_PATH"] = os.environ["GAP_LD_PATH"]

def run(todo, names, per_item=20):
    script = os.path.join(os.environ.get("TMPDIR", "/tmp"), "name_records_run.g")
    with open(script, "w") as f:
        f.write("L := [%s];;\n" % ",".join("[%d,%d]" % p for p in todo))
        f.write('for p in L do Print(p[1], "|", p[2], "|", '
                'ReplacedString(StructureDescription(SmallGroup(p[1], p[2])), " ", ""), "\\n"); od;\nQUIT;\n')
    proc = subprocess.Popen(GAP + [script], stdin=subprocess.DEVNULL, stdout=subprocess.PIPE,
                            env=ENV, text=True, bufsize=1,
                            preexec_fn=lambda: resource.setrlimit(resource.RLIMIT_STACK, (resource.RLIM_INFINITY,) * 2))
    buf = ""
    while True:
        r, _, _ = select.select([proc.stdout], [], [], per_item)
        if not r:
            proc.kill(); proc.wait(); return
        chunk = os.read(proc.stdout.fileno(), 65536).decode()
        if not chunk:
            proc.wait(); return
        buf += chunk
        while "\n" in buf:
            line, buf = buf.split("\n", 1)
            parts = line.split("|")
            if len(parts) == 3:
                names[(int(parts[0]), int(parts[1]))] = parts[2]

def main(path):
    lines = open(path).read().splitlines()
    todo = [(int(l.split("|")[0]), int(l.split("|")[1])) for l in lines
            if l and l[0].isdigit() and l.split("|")[3] == "?"]
    names = {}
    while True:
        rest = [p for p in todo if p not in names]
        if not rest:
            break
        run(rest, names)
        if rest[0] not in names:
            names[rest[0]] = "SmallGroup(%d,%d)" % rest[0]
            print("fallback", rest[0], file=sys.stderr, flush=True)
    out = []
    for l in lines:
        if l and l[0].isdigit():
            f = l.split("|")
            if f[3] == "?":
                f[3] = names[(int(f[0]), int(f[1]))]
            l = "|".join(f)
        out.append(l)
    open(path, "w").write("\n".join(out) + "\n")

if __name__ == "__main__":
    main(sys.argv[1])
