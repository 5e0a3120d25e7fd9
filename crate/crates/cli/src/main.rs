fn main() { println!("triforms"); }
