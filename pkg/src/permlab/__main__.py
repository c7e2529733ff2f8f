from permlab.cli import main

main()
