from mmad.cli.main import main

main()
