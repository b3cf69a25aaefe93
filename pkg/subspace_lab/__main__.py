# subspace_lab/__main__.py

from subspace_lab.cli import main

if __name__ == "__main__":
    main()
