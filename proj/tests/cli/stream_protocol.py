#!/usr/bin/env python3
"""Wires `fingerprint serve` to `fingerprint verify --remote -` through pipes."""

import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path


def connect(exe, served, local, extra, cwd):
    """Runs a server on `served` and a client on `local`, each reading the other's stdout."""
    server_in_r, server_in_w = os.pipe()
    client_in_r, client_in_w = os.pipe()
    server = subprocess.Popen([exe, "fingerprint", "serve", served], cwd=cwd, stdin=server_in_r,
                              stdout=client_in_w, stderr=subprocess.PIPE)
    client = subprocess.Popen([exe, "--json", "fingerprint", *extra, local, "--remote", "-"], cwd=cwd,
                              stdin=client_in_r, stdout=server_in_w, stderr=subprocess.PIPE)
    for fd in (server_in_r, server_in_w, client_in_r, client_in_w):
        os.close(fd)
    client_err = client.communicate(timeout=120)[1].decode()
    server_err = server.communicate(timeout=120)[1].decode()
    return client.returncode, client_err, server.returncode, server_err


def main():
    exe = str(Path(sys.argv[1]).resolve())
    failures = []

    def expect(ok, what):
        if not ok:
            failures.append(what)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        text = "".join(f"line {i}: the quick brown fox\n" for i in range(400)).encode()
        (tmp / "a.txt").write_bytes(text)
        (tmp / "same.txt").write_bytes(text)
        edited = bytearray(text)
        edited[5000] = ord("#")
        (tmp / "b.txt").write_bytes(bytes(edited))
        (tmp / "short.txt").write_bytes(text[:-1])

        code, err, scode, serr = connect(exe, "same.txt", "a.txt", ["verify"], tmp)
        report = json.loads(err)
        expect(code == 0 and report["result"]["verdict"] == "match", f"equal documents: exit {code}")
        expect(scode == 0 and serr.strip() == "served 11 requests", f"server after match: {scode} {serr!r}")

        code, err, _, _ = connect(exe, "b.txt", "a.txt", ["verify", "--rounds", "1"], tmp)
        expect(code == 1 and json.loads(err)["result"]["verdict"] == "mismatch", f"edited document: exit {code}")

        code, err, _, _ = connect(exe, "short.txt", "a.txt", ["verify"], tmp)
        result = json.loads(err)["result"]
        expect(code == 1 and result["length_mismatch"] and result["rounds"] == 0, f"length mismatch: exit {code}")

        code, err, _, _ = connect(exe, "b.txt", "a.txt", ["localize"], tmp)
        corrupted = json.loads(err)["result"]["corrupted"]
        expect(code == 1 and corrupted == [{"offset": 5000, "length": 1}], f"localize: exit {code} {corrupted}")

        # The server answers protocol errors in-band and keeps serving.
        proc = subprocess.run([exe, "fingerprint", "serve", "a.txt"], cwd=tmp, capture_output=True, text=True,
                              input="L\nQ 0 99999 7\nQ 0 1 1\nnonsense\nQ 0 1 7\n")
        lines = proc.stdout.splitlines()
        expect(proc.returncode == 0 and len(lines) == 5, f"serve: {proc.returncode} {lines}")
        expect(lines[0] == f"R {len(text)}", f"length reply {lines[0]}")
        expect(all(line.startswith("E ") for line in lines[1:4]), f"error replies {lines[1:4]}")
        expect(lines[4] == f"R {text[0] % 7}", f"residue reply {lines[4]}")

        # A server that dies mid-session is a transport error on the client.
        proc = subprocess.run([exe, "fingerprint", "verify", "a.txt", "--remote", "-"], cwd=tmp,
                              capture_output=True, text=True, input=f"R {len(text)}\n")
        expect(proc.returncode == 2 and "closed" in proc.stderr, f"truncated session: {proc.returncode}")

    for f in failures:
        print("FAIL", f)
    print(f"stream protocol: {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
