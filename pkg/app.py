# This Python file uses the following encoding: utf-8
import sys
sys.path.append("./")
from source.python import cli

if __name__ == "__main__":
    sys.exit(cli.main(sys.argv[1:]))
