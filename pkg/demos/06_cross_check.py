"""
Two implementations, one record stream
======================================

The repository ships a second, independently written decoder whose only
job is to disagree loudly.  Both sides read the same trace file and
write the same record format; the comparison runs on the files, field
by field, and names the first round where the implementations part
ways.  Bit-for-bit equality over seeded runs is the bar.
"""

import pathlib
import subprocess
import sys
import tempfile

work = pathlib.Path(tempfile.mkdtemp(prefix="crosscheck-"))
cfg_path = work / "run.cfg"
cfg_path.write_text(
    "kind = planar\n"
    "d = 5\n"
    "window = 1\n"
    "p_data = 0.01\n"
    "q_meas = 0.002\n"
    "seed = 20240817\n"
)


def run(*argv):
    """Run a console command, echo it, and return the completed process."""
    print("$", " ".join(str(a) for a in argv))
    return subprocess.run([str(a) for a in argv], capture_output=True,
                          text=True)


PRIMARY = (sys.executable, "-m", "qecdesk.cli")
REFEREE = (sys.executable, "-m", "qecgolden")

# Record a trace, then decode it with the production pipeline.
run(*PRIMARY, "gen-trace", "--config", cfg_path, "--out", work,
    "--rounds", "400")
run(*PRIMARY, "decode", "--config", cfg_path, "--trace", work / "trace.bin",
    "--out", work / "fast", "--rounds", "400", "--single-thread")

# The referee decodes the identical trace with its own lattice builder,
# its own checksum, its own cluster decoder -- no shared code -- and
# diffs the two record files.
res = run(*REFEREE, "compare", "--config", cfg_path,
          "--trace", work / "trace.bin",
          "--primary", work / "fast" / "records.txt",
          "--out", work / "referee")
print(res.stdout.strip(), "\n")
assert res.returncode == 0, "implementations disagree on a clean run"

# Now sabotage one bit.  Flip a correction bit in round 123 of the
# production output and ask the referee again.
rec_path = work / "fast" / "records.txt"
lines = rec_path.read_text().splitlines(keepends=True)
parts = lines[124].split()                      # header + 124 records
assert parts[0] == "123"
parts[3] = f"{int(parts[3], 16) ^ 1:02x}"       # correction field, bit 0
lines[124] = " ".join(parts) + "\n"
tampered = work / "tampered.txt"
tampered.write_text("".join(lines))

res = run(*REFEREE, "compare", "--config", cfg_path,
          "--trace", work / "trace.bin",
          "--primary", tampered,
          "--out", work / "referee2")
print(res.stdout.strip())
assert res.returncode == 1, "the referee missed a planted divergence"

# The one-stop version: the production CLI has a subcommand that runs
# the whole exercise and maps disagreement onto its own exit code.
res = run(*PRIMARY, "conformance", "--config", cfg_path,
          "--trace", work / "trace.bin", "--out", work / "oneshot",
          "--rounds", "400")
print("\nconformance subcommand exit", res.returncode)
assert res.returncode == 0
