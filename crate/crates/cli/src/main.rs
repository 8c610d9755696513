fn main() {
    println!("phylodist");
}
